#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace pnkit {

/// Named coordinates of the worst sample seen by a checker.
using Witness = std::vector<std::pair<std::string, double>>;

struct AxiomResult {
    std::string name;
    bool passed = true;
    double worst = 0.0;  ///< largest violation seen; <= 0 means none
    Witness witness;
    std::string path;  ///< "exact" or "grid"

    AxiomResult() = default;
    AxiomResult(std::string n, std::string p = "exact") : name(std::move(n)), path(std::move(p)) {}

    /// Records a sample; keeps the first sample among equal violations.
    void observe(double violation, double tol, Witness w) {
        if (witness.empty() || violation > worst) {
            worst = violation;
            witness = std::move(w);
        }
        if (violation > tol) passed = false;
    }
};

struct CheckReport {
    std::string subject;
    std::vector<AxiomResult> results;
    std::vector<std::string> notes;

    bool passed() const {
        return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.passed; });
    }
    const AxiomResult* find(const std::string& name) const {
        for (const auto& r : results)
            if (r.name == name) return &r;
        return nullptr;
    }
};

}  // namespace pnkit
