#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "hopfkit/model.hpp"

namespace hopfkit {

struct SimState {
  int N = 0;
  double time = 0;
  double lambda = 0;
  std::vector<CVec4> modes;  // modes[n + N] = ŷ(n), n ∈ [−N, N]

  CVec4& at(int n) { return modes[n + N]; }
  const CVec4& at(int n) const { return modes[n + N]; }
  double max_abs() const;
};

// Eigenvector of M̃(1,λ) with the largest growth rate, largest entry real.
CVec4 leading_mode_vector(const Model& m, double lambda);
// Mode 1 seeded with amp·v, mode −1 with its conjugate.
ModeField default_perturbation(const Model& m, double lambda, double amp = 1e-4);

// Modes given with n < 0 must be conjugates of the n > 0 entries (and mode 0
// real); otherwise ConstraintViolation. Missing conjugates are filled in.
SimState init_state(const Model& m, double lambda, int N, const ModeField& perturbation);

// Enforces ŷ(−n) = conj ŷ(n) and Σⱼ ŷⱼ(0) = 0.
void project(SimState& s);

CMat4 exact_propagator(const Model& m, double lambda, int n, double t);

// Strang splitting: exact half-step linear propagator per mode, RK4 for
// ŷ' = Q̂(ŷ) with Q evaluated on a 3/2-rule grid, exact half-step again.
class Integrator {
 public:
  Integrator(const Model& m, double lambda, int N, double dt);
  ~Integrator();
  Integrator(Integrator&&) noexcept;
  Integrator& operator=(Integrator&&) noexcept;

  void step(SimState& s) const;  // BlowupDetected past amplitude 1e6
  SimState stepped(SimState s) const {
    step(s);
    return s;
  }
  int grid_size() const;
  double dt() const;

  // y(x_j) for x_j = j/grid_size(), per species.
  std::vector<CVec4> to_grid(const SimState& s) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SimDiagnostics {
  std::vector<double> t;
  std::vector<double> probe;                     // y₁(0, t)
  std::vector<std::vector<double>> mode_amplitude;  // [sample][n] = ‖ŷ(n)‖, n = 0..3
  std::optional<double> growth_rate;             // fit of log ‖ŷ(1)‖ in the linear regime
  std::optional<double> period;
  std::optional<double> angular_frequency;
  double amplitude = 0;                          // max |probe| over the final quarter
  bool limit_cycle = false;
  bool blowup = false;
  double blowup_time = 0;
};

struct SimParams {
  double T = 200;
  double dt = 1e-3;
  int N = 64;
  double sample_dt = 0.01;
  // End of the window used for the growth fit; the fit also stops once
  // ‖ŷ(1)‖ exceeds 100× its initial value.
  double growth_window = 5;
};

// Blow-up is recorded in the diagnostics when catch_blowup is set, otherwise
// BlowupDetected propagates.
SimDiagnostics run_diagnostics(const Model& m, double lambda, const SimParams& p,
                               const ModeField& perturbation, bool catch_blowup = false,
                               std::ostream* space_time_csv = nullptr, int csv_stride = 100,
                               int csv_points = 64);

std::optional<double> autocorrelation_period(const std::vector<double>& series, double dt,
                                             double threshold = 0.99);

}  // namespace hopfkit
