#include "hopfkit/pde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include "hopfkit/dispersion.hpp"

namespace hopfkit {

double SimState::max_abs() const {
  double m = 0;
  for (const auto& v : modes) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

CVec4 leading_mode_vector(const Model& m, double lambda) {
  Eigen::ComplexEigenSolver<CMat4> es(symbol_matrix_mode(m, 1, lambda));
  int j = 0;
  for (int i = 1; i < 4; ++i)
    if (es.eigenvalues()(i).real() > es.eigenvalues()(j).real()) j = i;
  CVec4 v = es.eigenvectors().col(j).normalized();
  int big = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(v(i)) > std::abs(v(big))) big = i;
  return v * (std::abs(v(big)) / v(big));
}

ModeField default_perturbation(const Model& m, double lambda, double amp) {
  const CVec4 v = amp * leading_mode_vector(m, lambda);
  return {{1, v}, {-1, v.conjugate()}};
}

void project(SimState& s) {
  for (int n = 1; n <= s.N; ++n) {
    const CVec4 avg = 0.5 * (s.at(n) + s.at(-n).conjugate());
    s.at(n) = avg;
    s.at(-n) = avg.conjugate();
  }
  CVec4& z = s.at(0);
  z = z.real().cast<cplx>();
  z -= CVec4::Constant(z.sum() / 4.0);
}

SimState init_state(const Model& m, double lambda, int N, const ModeField& perturbation) {
  (void)m;
  if (N < 8) throw DomainError("init_state: N must be at least 8");
  if (lambda == 0.0) throw DomainError("init_state: lambda must be nonzero");
  SimState s;
  s.N = N;
  s.lambda = lambda;
  s.modes.assign(2 * N + 1, CVec4::Zero());
  for (const auto& [n, v] : perturbation) {
    if (std::abs(n) > N) throw DomainError("init_state: perturbation mode outside the truncation");
    const auto partner = perturbation.find(-n);
    const double tol = 1e-14 * (1 + v.norm());
    if (n == 0 && v.imag().norm() > tol)
      throw ConstraintViolation("init_state: mode 0 must be real");
    if (partner != perturbation.end() && (partner->second - v.conjugate()).norm() > tol)
      throw ConstraintViolation("init_state: perturbation violates reality");
    s.at(n) = v;
    if (partner == perturbation.end()) s.at(-n) = v.conjugate();
  }
  project(s);
  return s;
}

CMat4 exact_propagator(const Model& m, double lambda, int n, double t) {
  return (t * symbol_matrix_mode(m, n, lambda)).exp();
}

namespace {

int smooth_size(int n) {
  for (;; ++n) {
    int r = n;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return n;
  }
}

}  // namespace

struct Integrator::Impl {
  Vec4 c;
  int N = 0, Ng = 0;
  double dt = 0, lambda = 0;
  std::vector<CMat4> half;  // exp(dt/2·M̃(n,λ)), index n + N
  mutable Eigen::FFT<double> fft;
  mutable std::vector<std::vector<cplx>> spec, grid;

  void grid_of(const std::vector<CVec4>& modes) const {
    for (int j = 0; j < 4; ++j) {
      std::fill(spec[j].begin(), spec[j].end(), cplx(0));
      for (int n = -N; n <= N; ++n) spec[j][(n + Ng) % Ng] = modes[n + N](j);
      fft.inv(grid[j], spec[j]);
      for (auto& g : grid[j]) g *= double(Ng);
    }
  }

  std::vector<CVec4> rhs(const std::vector<CVec4>& modes) const {
    grid_of(modes);
    for (int x = 0; x < Ng; ++x) {
      const CVec4 y(grid[0][x], grid[1][x], grid[2][x], grid[3][x]);
      const CVec4 q = eval_Q<cplx>(y, c);
      for (int j = 0; j < 4; ++j) grid[j][x] = q(j);
    }
    std::vector<CVec4> out(2 * N + 1);
    for (int j = 0; j < 4; ++j) {
      fft.fwd(spec[j], grid[j]);
      for (int n = -N; n <= N; ++n) out[n + N](j) = spec[j][(n + Ng) % Ng] / double(Ng);
    }
    return out;
  }
};

Integrator::Integrator(const Model& m, double lambda, int N, double dt) : impl_(std::make_unique<Impl>()) {
  if (!(dt > 0)) throw DomainError("Integrator: dt must be positive");
  if (N < 1) throw DomainError("Integrator: N must be positive");
  auto& I = *impl_;
  I.c = m.c;
  I.N = N;
  I.Ng = smooth_size(3 * N + 2);
  I.dt = dt;
  I.lambda = lambda;
  I.half.resize(2 * N + 1);
  for (int n = -N; n <= N; ++n) I.half[n + N] = exact_propagator(m, lambda, n, 0.5 * dt);
  I.spec.assign(4, std::vector<cplx>(I.Ng));
  I.grid.assign(4, std::vector<cplx>(I.Ng));
}

Integrator::~Integrator() = default;
Integrator::Integrator(Integrator&&) noexcept = default;
Integrator& Integrator::operator=(Integrator&&) noexcept = default;

int Integrator::grid_size() const { return impl_->Ng; }
double Integrator::dt() const { return impl_->dt; }

std::vector<CVec4> Integrator::to_grid(const SimState& s) const {
  impl_->grid_of(s.modes);
  std::vector<CVec4> out(impl_->Ng);
  for (int x = 0; x < impl_->Ng; ++x)
    for (int j = 0; j < 4; ++j) out[x](j) = impl_->grid[j][x];
  return out;
}

void Integrator::step(SimState& s) const {
  const auto& I = *impl_;
  if (s.N != I.N) throw DomainError("Integrator::step: truncation mismatch");
  auto linear = [&](std::vector<CVec4>& y) {
    for (int i = 0; i < 2 * I.N + 1; ++i) y[i] = I.half[i] * y[i];
  };
  std::vector<CVec4>& y = s.modes;
  linear(y);
  if (I.c.cwiseAbs().maxCoeff() > 0) {
    const double h = I.dt;
    auto axpy = [&](double a, const std::vector<CVec4>& k) {
      std::vector<CVec4> out(y);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * k[i];
      return out;
    };
    const auto k1 = I.rhs(y);
    const auto k2 = I.rhs(axpy(h / 2, k1));
    const auto k3 = I.rhs(axpy(h / 2, k2));
    const auto k4 = I.rhs(axpy(h, k3));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  linear(y);
  project(s);
  s.time += I.dt;
  const double amp = s.max_abs();
  if (!(amp <= 1e6)) {
    std::ostringstream msg;
    msg << "amplitude exceeded 1e6 at t = " << s.time;
    throw BlowupDetected(msg.str());
  }
}

std::optional<double> autocorrelation_period(const std::vector<double>& series, double dt,
                                             double threshold) {
  const std::size_t n = series.size();
  if (n < 16) return std::nullopt;
  double mean = 0;
  for (double v : series) mean += v;
  mean /= double(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = series[i] - mean;
  auto r = [&](std::size_t lag) {
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      sxy += x[i] * x[i + lag];
      sxx += x[i] * x[i];
      syy += x[i + lag] * x[i + lag];
    }
    return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  };
  const std::size_t max_lag = n / 3;
  std::size_t lag = 1;
  while (lag < max_lag && r(lag) > 0) ++lag;
  if (lag >= max_lag) return std::nullopt;
  std::size_t best = lag;
  double best_r = r(lag);
  for (; lag < max_lag; ++lag) {
    const double v = r(lag);
    if (v > best_r) {
      best_r = v;
      best = lag;
    } else if (best_r > 0 && v < best_r) {
      break;
    }
  }
  if (best_r < threshold || 2 * best >= n) return std::nullopt;
  if (r(2 * best) < threshold) return std::nullopt;
  // Parabolic refinement of the peak.
  double shift = 0;
  if (best > 1) {
    const double a = r(best - 1), b = best_r, c = r(best + 1);
    const double den = a - 2 * b + c;
    if (den < 0) shift = 0.5 * (a - c) / den;
  }
  return (double(best) + shift) * dt;
}

SimDiagnostics run_diagnostics(const Model& m, double lambda, const SimParams& p,
                               const ModeField& perturbation, bool catch_blowup,
                               std::ostream* csv, int csv_stride, int csv_points) {
  if (!(p.T > 0) || !(p.dt > 0) || !(p.sample_dt > 0)) throw DomainError("run_diagnostics: nonpositive parameter");
  const Integrator integ(m, lambda, p.N, p.dt);
  SimState s = init_state(m, lambda, p.N, perturbation);
  SimDiagnostics d;
  const long steps = std::lround(p.T / p.dt);
  const long stride = std::max(1L, std::lround(p.sample_dt / p.dt));

  auto record = [&] {
    d.t.push_back(s.time);
    cplx probe = 0;
    for (int n = -s.N; n <= s.N; ++n) probe += s.at(n)(0);
    d.probe.push_back(probe.real());
    std::vector<double> amps;
    for (int n = 0; n <= std::min(3, s.N); ++n) amps.push_back(s.at(n).norm());
    d.mode_amplitude.push_back(amps);
  };
  auto emit = [&] {
    if (!csv) return;
    for (int j = 0; j < csv_points; ++j) {
      const double x = double(j) / csv_points;
      CVec4 y = CVec4::Zero();
      for (int n = -s.N; n <= s.N; ++n) y += std::exp(kI * (2 * kPi * n * x)) * s.at(n);
      *csv << s.time << ',' << x;
      for (int q = 0; q < 4; ++q) *csv << ',' << y(q).real();
      *csv << '\n';
    }
  };

  record();
  emit();
  try {
    for (long i = 1; i <= steps; ++i) {
      integ.step(s);
      if (i % stride == 0) record();
      if (csv && i % csv_stride == 0) emit();
    }
  } catch (const BlowupDetected&) {
    if (!catch_blowup) throw;
    d.blowup = true;
    d.blowup_time = s.time;
  }

  // Growth fit on log ‖ŷ(1)‖ over the linear window.
  if (d.mode_amplitude.size() > 1 && d.mode_amplitude[0].size() > 1 && d.mode_amplitude[0][1] > 0) {
    const double a0 = d.mode_amplitude[0][1];
    double st = 0, sl = 0, stt = 0, stl = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < d.t.size(); ++i) {
      const double a = d.mode_amplitude[i][1];
      if (d.t[i] > p.growth_window || a > 100 * a0 || !(a > 0)) break;
      const double l = std::log(a);
      st += d.t[i];
      sl += l;
      stt += d.t[i] * d.t[i];
      stl += d.t[i] * l;
      ++cnt;
    }
    if (cnt >= 10) d.growth_rate = (cnt * stl - st * sl) / (cnt * stt - st * st);
  }

  if (!d.blowup && d.probe.size() >= 32) {
    const std::size_t q = d.probe.size() / 4;
    const std::vector<double> tail(d.probe.end() - 2 * q, d.probe.end());
    const double sdt = d.t.size() > 1 ? d.t[1] - d.t[0] : p.sample_dt;
    d.period = autocorrelation_period(tail, sdt);
    double last = 0, prev = 0;
    for (std::size_t i = d.probe.size() - q; i < d.probe.size(); ++i) last = std::max(last, std::abs(d.probe[i]));
    for (std::size_t i = d.probe.size() - 2 * q; i < d.probe.size() - q; ++i) prev = std::max(prev, std::abs(d.probe[i]));
    d.amplitude = last;
    if (d.period) d.angular_frequency = 2 * kPi / *d.period;
    d.limit_cycle = d.period.has_value() && last > 0 && std::abs(last - prev) <= 0.05 * last;
  } else if (!d.probe.empty()) {
    d.amplitude = std::abs(d.probe.back());
  }
  return d;
}

}  // namespace hopfkit
