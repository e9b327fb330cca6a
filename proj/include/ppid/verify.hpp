#pragma once

#include "ppid/distribution.hpp"
#include "ppid/lattice.hpp"

#include <string>
#include <vector>

namespace ppid {

struct PropertyResult {
    std::string name;
    bool passed = true;
    std::size_t checks = 0;
    std::size_t violations = 0;
    double worst = 0.0;  // largest violation magnitude seen
    std::string detail;  // first violation, if any
};

struct VerifyOptions {
    double tolerance = 1e-9;
    double base = 2.0;
    std::size_t lattice_cap = RedundancyLattice::default_cap;
};

/// Runs every invariant that applies to `dist`: measure identities, the
/// axiom checks, lattice monotonicity, non-negativity of partial atoms,
/// closed form against Moebius inversion, totals, two-event invariance and,
/// for composite targets, the conditional forms and the target chain rule.
std::vector<PropertyResult> run_invariant_suite(const JointDistribution& dist, const VerifyOptions& options = {});

}  // namespace ppid
