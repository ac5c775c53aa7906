#include "chemauto/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemauto/errors.hpp"

namespace chemauto {

void solve_dense(std::vector<double>& a, std::vector<double>& b,
                 std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double mag = std::abs(a[row * n + col]);
      if (mag > best) {
        best = mag;
        pivot = row;
      }
    }
    if (!(best > 0.0)) throw NumericsError("singular matrix in dense solve");
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a[col * n + k], a[pivot * n + k]);
      }
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a[row * n + col] * inv;
      if (factor == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) {
        a[row * n + k] -= factor * a[col * n + k];
      }
      b[row] -= factor * b[col];
    }
  }
  for (std::size_t row = n; row-- > 0;) {
    double sum = b[row];
    for (std::size_t k = row + 1; k < n; ++k) sum -= a[row * n + k] * b[k];
    b[row] = sum / a[row * n + row];
  }
}

namespace {

// Kaps-Rentrop coefficients, Shampine's parameter set.  gamma = 1/2 gives
// L-stability; stages 3 and 4 share a right-hand-side evaluation.
constexpr double kGamma = 0.5;
constexpr double kA21 = 2.0;
constexpr double kA31 = 48.0 / 25.0;
constexpr double kA32 = 6.0 / 25.0;
constexpr double kC21 = -8.0;
constexpr double kC31 = 372.0 / 25.0;
constexpr double kC32 = 12.0 / 5.0;
constexpr double kC41 = -112.0 / 125.0;
constexpr double kC42 = -54.0 / 125.0;
constexpr double kC43 = -2.0 / 5.0;
constexpr double kB1 = 19.0 / 9.0;
constexpr double kB2 = 1.0 / 2.0;
constexpr double kB3 = 25.0 / 108.0;
constexpr double kB4 = 125.0 / 108.0;
constexpr double kE1 = 17.0 / 54.0;
constexpr double kE2 = 7.0 / 36.0;
constexpr double kE3 = 0.0;
constexpr double kE4 = 125.0 / 108.0;

constexpr double kSafety = 0.9;
constexpr double kMaxGrow = 1.5;
constexpr double kMinShrink = 0.5;

class Stepper {
 public:
  Stepper(const OdeSystem& system, const IntegratorOptions& opt,
          std::size_t n)
      : sys_(system),
        opt_(opt),
        n_(n),
        jac_(n * n),
        mat_(n * n),
        f0_(n),
        ft_(n),
        ytmp_(n),
        g1_(n),
        g2_(n),
        g3_(n),
        g4_(n),
        ynew_(n),
        err_(n) {}

  // Attempts one step of size h from y.  On success returns the realized
  // error ratio (<= 1) and leaves the result in ynew(); on failure returns a
  // ratio > 1.  Steps that undershoot the negativity floor report a ratio of
  // +infinity so the caller halves the step.
  double try_step(std::span<const double> y, double h) {
    sys_.rhs(y, f0_);
    fill_jacobian(y);

    // mat = I/(gamma*h) - J, one factorization reused by all four stages.
    const double diag = 1.0 / (kGamma * h);
    for (std::size_t i = 0; i < n_ * n_; ++i) mat_[i] = -jac_[i];
    for (std::size_t i = 0; i < n_; ++i) mat_[i * n_ + i] += diag;

    auto solve_stage = [&](std::vector<double>& g) {
      std::vector<double> a = mat_;
      solve_dense(a, g, n_);
    };

    for (std::size_t i = 0; i < n_; ++i) g1_[i] = f0_[i];
    solve_stage(g1_);

    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + kA21 * g1_[i];
    sys_.rhs(ytmp_, ft_);
    for (std::size_t i = 0; i < n_; ++i) g2_[i] = ft_[i] + kC21 * g1_[i] / h;
    solve_stage(g2_);

    for (std::size_t i = 0; i < n_; ++i) {
      ytmp_[i] = y[i] + kA31 * g1_[i] + kA32 * g2_[i];
    }
    sys_.rhs(ytmp_, ft_);
    for (std::size_t i = 0; i < n_; ++i) {
      g3_[i] = ft_[i] + (kC31 * g1_[i] + kC32 * g2_[i]) / h;
    }
    solve_stage(g3_);

    // Stage 4 reuses the stage-3 evaluation point.
    for (std::size_t i = 0; i < n_; ++i) {
      g4_[i] = ft_[i] + (kC41 * g1_[i] + kC42 * g2_[i] + kC43 * g3_[i]) / h;
    }
    solve_stage(g4_);

    double ratio = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      ynew_[i] = y[i] + kB1 * g1_[i] + kB2 * g2_[i] + kB3 * g3_[i] +
                 kB4 * g4_[i];
      err_[i] = kE1 * g1_[i] + kE2 * g2_[i] + kE3 * g3_[i] + kE4 * g4_[i];
      const double scale =
          opt_.abs_tol +
          opt_.rel_tol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
      ratio = std::max(ratio, std::abs(err_[i]) / scale);
      if (!std::isfinite(ynew_[i])) {
        return std::numeric_limits<double>::infinity();
      }
      if (ynew_[i] < opt_.negative_floor) {
        return std::numeric_limits<double>::infinity();
      }
    }
    return ratio;
  }

  std::span<const double> result() const { return ynew_; }

 private:
  void fill_jacobian(std::span<const double> y) {
    if (sys_.jacobian) {
      sys_.jacobian(y, jac_);
      return;
    }
    // Forward differences around y; f0_ already holds f(y).
    std::vector<double> yp(y.begin(), y.end());
    for (std::size_t j = 0; j < n_; ++j) {
      const double delta =
          std::sqrt(std::numeric_limits<double>::epsilon()) *
          std::max(std::abs(y[j]), 1e-8);
      const double saved = yp[j];
      yp[j] = saved + delta;
      sys_.rhs(yp, ft_);
      yp[j] = saved;
      for (std::size_t i = 0; i < n_; ++i) {
        jac_[i * n_ + j] = (ft_[i] - f0_[i]) / delta;
      }
    }
  }

  const OdeSystem& sys_;
  const IntegratorOptions& opt_;
  std::size_t n_;
  std::vector<double> jac_, mat_;
  std::vector<double> f0_, ft_, ytmp_;
  std::vector<double> g1_, g2_, g3_, g4_, ynew_, err_;
};

}  // namespace

StiffIntegrator::StiffIntegrator(OdeSystem system, IntegratorOptions options)
    : system_(std::move(system)), options_(options) {
  if (!system_.rhs) throw InputError("StiffIntegrator needs a right-hand side");
  if (!(options_.rel_tol > 0.0) || !(options_.abs_tol > 0.0)) {
    throw InputError("integrator tolerances must be positive");
  }
}

void StiffIntegrator::integrate(
    std::span<double> y, double t0, double duration,
    std::span<const double> sample_offsets,
    const std::function<void(double, std::span<const double>)>& on_sample)
    const {
  if (duration < 0.0 || !std::isfinite(duration)) {
    throw InputError("integration duration must be finite and nonnegative");
  }
  for (std::size_t i = 0; i < sample_offsets.size(); ++i) {
    const double off = sample_offsets[i];
    if (!(off > 0.0) || off > duration * (1.0 + 1e-12)) {
      throw InputError("sample offsets must lie in (0, duration]");
    }
    if (i > 0 && !(off > sample_offsets[i - 1])) {
      throw InputError("sample offsets must be strictly increasing");
    }
  }
  if (duration == 0.0) return;

  Stepper stepper(system_, options_, y.size());

  double t = 0.0;  // time relative to t0, for cleaner boundary arithmetic
  std::size_t next_sample = 0;
  double h = std::min(options_.initial_step_s, duration);
  std::size_t steps = 0;

  while (t < duration) {
    // Never step past the next sample boundary or the interval end, so the
    // recorded samples are exact integrator states, not interpolants.
    double boundary = duration;
    if (next_sample < sample_offsets.size()) {
      boundary = sample_offsets[next_sample];
    }
    h = std::min(h, boundary - t);

    if (++steps > options_.max_steps) {
      throw NumericsError("integrator exceeded max_steps");
    }
    if (h < options_.min_step_s) {
      throw NumericsError("integrator step size underflow at t=" +
                          std::to_string(t0 + t) + " s");
    }

    const double ratio = stepper.try_step(y, h);
    if (ratio <= 1.0) {
      const auto res = stepper.result();
      std::copy(res.begin(), res.end(), y.begin());
      t += h;
      // Grow conservatively; a ratio of 0 means the error was pure roundoff.
      double grow = kMaxGrow;
      if (ratio > 0.0) {
        grow = std::min(kMaxGrow, kSafety * std::pow(ratio, -0.25));
      }
      h *= std::max(grow, 1.0e-2);
      while (next_sample < sample_offsets.size() &&
             t >= sample_offsets[next_sample] - 1e-9) {
        on_sample(t0 + sample_offsets[next_sample], y);
        ++next_sample;
      }
    } else if (std::isinf(ratio)) {
      h *= 0.5;  // negativity or non-finite trial state
    } else {
      const double shrink =
          std::max(kMinShrink, kSafety * std::pow(ratio, -1.0 / 3.0));
      h *= shrink;
    }
  }
  // Flush samples that coincide with the interval end within tolerance.
  while (next_sample < sample_offsets.size()) {
    on_sample(t0 + sample_offsets[next_sample], y);
    ++next_sample;
  }
}

}  // namespace chemauto
