#include "pcfi/propagation.hpp"

#include <cmath>
#include <sstream>

#include "pcfi/errors.hpp"

namespace pcfi {

CorrelationMatrix correlation(const Eigen::Ref<const Matrix>& xhat) {
  const auto n = xhat.rows();
  const auto f = xhat.cols();
  if (n < 2) throw InputError("correlation needs at least two rows");

  CorrelationMatrix out;
  out.means = xhat.colwise().mean().transpose();
  const Matrix centered = xhat.rowwise() - out.means.transpose();
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  out.stds = cov.diagonal().cwiseMax(0.0).cwiseSqrt();

  // A channel whose spread is at rounding level relative to its magnitude
  // counts as constant.
  std::vector<bool> usable(static_cast<std::size_t>(f));
  for (Eigen::Index d = 0; d < f; ++d) {
    const double scale = xhat.col(d).cwiseAbs().maxCoeff();
    usable[d] = out.stds[d] > 1e-12 * scale && std::isfinite(out.stds[d]);
  }

  out.r = Matrix::Zero(f, f);
  for (Eigen::Index b = 0; b < f; ++b) {
    if (!usable[b]) continue;
    for (Eigen::Index a = 0; a < f; ++a) {
      if (a == b || !usable[a]) continue;
      const double r = cov(a, b) / (out.stds[a] * out.stds[b]);
      out.r(a, b) = std::isfinite(r) ? r : 0.0;
    }
  }
  // Symmetrise exactly; the two triangles of the product can differ in the
  // last bit.
  out.r = (0.5 * (out.r + out.r.transpose())).eval();
  return out;
}

void validate(const PropagationConfig& config) {
  validate_alpha(config.alpha);
  if (config.receiver_alpha) validate_alpha(*config.receiver_alpha);
  if (!(config.beta >= 0.0) || !std::isfinite(config.beta)) {
    std::ostringstream os;
    os << "beta must be a finite value >= 0, got " << config.beta;
    throw InputError(os.str());
  }
}

namespace {

void check_stage2_shapes(const Eigen::Ref<const Matrix>& xhat, const SpdsMatrix& spds) {
  if (xhat.rows() != spds.num_nodes() || xhat.cols() != spds.num_channels()) {
    throw InputError("stage 2: SPD-S shape does not match the feature matrix");
  }
}

}  // namespace

Matrix propagate_stage2(const Eigen::Ref<const Matrix>& xhat, const SpdsMatrix& spds,
                        const PropagationConfig& config) {
  validate(config);
  check_stage2_shapes(xhat, spds);
  if (config.beta == 0.0) return xhat;

  const auto corr = correlation(xhat);
  const Matrix source = pseudo_confidence(spds, config.alpha);
  const Matrix receiver =
      (1.0 - pseudo_confidence(spds, config.receiver_base()).array()).matrix();
  const Matrix weighted =
      source.cwiseProduct(xhat.rowwise() - corr.means.transpose());
  const Matrix update = weighted * corr.r;
  return xhat + config.beta * receiver.cwiseProduct(update);
}

Matrix stage2_bruteforce_oracle(const Eigen::Ref<const Matrix>& xhat,
                                const SpdsMatrix& spds,
                                const PropagationConfig& config) {
  validate(config);
  check_stage2_shapes(xhat, spds);
  const auto n = xhat.rows();
  const auto f = xhat.cols();
  if (static_cast<double>(n) * static_cast<double>(f) * static_cast<double>(f) > 1e6) {
    throw InputError("stage-2 brute force limited to N * F^2 <= 1e6");
  }

  const auto corr = correlation(xhat);
  auto conf = [](double base, std::int32_t s) {
    return s == kUnreachable ? 0.0 : std::pow(base, static_cast<double>(s));
  };

  Matrix out(n, f);
  Matrix b(f, f);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index a = 0; a < f; ++a) {
      for (Eigen::Index c = 0; c < f; ++c) {
        b(a, c) = a == c ? 0.0
                         : config.beta * (1.0 - conf(config.receiver_base(), spds(i, a))) *
                               conf(config.alpha, spds(i, c)) * corr.r(a, c);
      }
    }
    const Vector centered = xhat.row(i).transpose() - corr.means;
    out.row(i) = (xhat.row(i).transpose() + b * centered).transpose();
  }
  return out;
}

}  // namespace pcfi
