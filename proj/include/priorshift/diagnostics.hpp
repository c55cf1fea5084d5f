#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "priorshift/dataset.hpp"

namespace priorshift {

// Empirical check of the shared-conditional assumption p(x|z) equal across
// domains. For each attribute class z, a k-nearest-neighbor domain classifier
// is fit on the pooled z-restricted samples and scored by 2-fold
// cross-validated AUC (ties in the score credit 0.5, since k-NN votes are
// heavily quantized). AUC near 0.5 supports the assumption for that class;
// AUC near 1 flags a violation. A class empty in either domain is undefined.
std::vector<std::optional<double>> assumption_diagnostic(const Dataset& source,
                                                         const Dataset& target,
                                                         std::uint64_t seed);

// Tie-aware Mann-Whitney AUC of scores for label 1 against label 0.
double auc_tie_aware(const std::vector<double>& scores,
                     const std::vector<int>& labels);

}  // namespace priorshift
