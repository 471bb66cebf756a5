#pragma once

#include <optional>

#include "pcfi/spds.hpp"
#include "pcfi/types.hpp"

namespace pcfi {

// Pearson correlations between the channels of a recovered feature matrix.
// The diagonal is stored as zero, and rows/columns of zero-variance channels
// are zero.
struct CorrelationMatrix {
  Matrix r;       // F x F
  Vector means;   // per channel, over all N rows
  Vector stds;    // per channel, N - 1 denominator
};

// Throws InputError when there are fewer than two rows.
CorrelationMatrix correlation(const Eigen::Ref<const Matrix>& xhat);

struct PropagationConfig {
  double alpha = 0.8;
  double beta = 1e-3;
  // Base of the receiver gate (1 - base^S). Defaults to alpha.
  std::optional<double> receiver_alpha;

  double receiver_base() const { return receiver_alpha.value_or(alpha); }
};

void validate(const PropagationConfig& config);

// Stage 2 in vectorised form:
//   X~ = X^ + beta * (1 - a^S) .* ((a^S .* (X^ - 1 m^T)) R)
// Entries with S = 0 are returned unchanged.
Matrix propagate_stage2(const Eigen::Ref<const Matrix>& xhat,
                        const SpdsMatrix& spds, const PropagationConfig& config);

// Same result computed literally: one F x F matrix B per node with
// B[a,b] = beta (1 - a^S[i,a]) a^S[i,b] R[a,b] for a != b, then
// x~_i = x^_i + B (x^_i - m). Throws InputError when N * F^2 > 1e6.
Matrix stage2_bruteforce_oracle(const Eigen::Ref<const Matrix>& xhat,
                                const SpdsMatrix& spds,
                                const PropagationConfig& config);

}  // namespace pcfi
