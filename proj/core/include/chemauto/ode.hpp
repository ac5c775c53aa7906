#pragma once

// Adaptive stiff integrator for small dense autonomous systems.
//
// The method is a 4-stage Rosenbrock scheme of order 4 with an embedded
// third-order error estimate (the classical Kaps-Rentrop family with
// Shampine's parameter set).  Each step costs one Jacobian, one LU
// factorization and three right-hand-side evaluations, which suits the
// relaxation-oscillator kinetics here: a handful of state variables with
// widely separated timescales.
//
// Concentration semantics are built into the step control: any trial step
// that drags a component below `negative_floor` is rejected and retried with
// a smaller step, so trajectories never dip meaningfully below zero.

#include <functional>
#include <span>
#include <vector>

namespace chemauto {

struct IntegratorOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  double initial_step_s = 1e-3;
  double min_step_s = 1e-13;       // below this the step size has underflowed
  double negative_floor = -1e-12;  // reject steps undershooting below this
  std::size_t max_steps = 50'000'000;
};

// dydt must be an autonomous right-hand side.  jacobian (row-major n x n,
// J[i*n+j] = d f_i / d y_j) is optional; when absent a forward-difference
// approximation is used.
struct OdeSystem {
  std::function<void(std::span<const double> y, std::span<double> dydt)> rhs;
  std::function<void(std::span<const double> y, std::span<double> jac)>
      jacobian;
};

class StiffIntegrator {
 public:
  StiffIntegrator(OdeSystem system, IntegratorOptions options);

  // Advances y in place from t0 to t0 + duration.  on_sample(t, y) is called
  // exactly at t0 + offset for every entry of sample_offsets, which must be
  // strictly increasing and lie in (0, duration].  A zero duration is the
  // identity.  Throws NumericsError on step-size underflow or when max_steps
  // is exhausted.
  void integrate(std::span<double> y, double t0, double duration,
                 std::span<const double> sample_offsets,
                 const std::function<void(double, std::span<const double>)>&
                     on_sample) const;

  const IntegratorOptions& options() const { return options_; }
  IntegratorOptions& options() { return options_; }

 private:
  OdeSystem system_;
  IntegratorOptions options_;
};

// In-place LU solve with partial pivoting for the small dense systems the
// integrator assembles; exposed for tests.  a is row-major n x n and is
// overwritten; b is overwritten with the solution.  Throws NumericsError on a
// numerically singular matrix.
void solve_dense(std::vector<double>& a, std::vector<double>& b,
                 std::size_t n);

}  // namespace chemauto
