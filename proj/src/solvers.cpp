#include "tspde/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "fft.hpp"
#include "tspde/error.hpp"
#include "tspde/spectral.hpp"

namespace tspde {

const char* to_string(Equation eq) noexcept {
  switch (eq) {
    case Equation::heat: return "heat";
    case Equation::decoupled_ac: return "dac";
    case Equation::allen_cahn: return "ac";
  }
  return "?";
}

Equation parse_equation(const std::string& name) {
  if (name == "heat") return Equation::heat;
  if (name == "dac" || name == "decoupled_ac") return Equation::decoupled_ac;
  if (name == "ac" || name == "allen_cahn") return Equation::allen_cahn;
  throw Error(ErrorKind::config, "unknown equation '" + name + "'");
}

void SchemeConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::config, m); };
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) bad("alpha must be finite and >= 0");
  if (!(g >= 0.0) || !std::isfinite(g)) bad("g must be finite and >= 0");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) bad("sigma must be finite and >= 0");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) bad("t_final must be finite and > 0");
  if (steps < 0) bad("number of steps must be >= 0");
}

// ---------------------------------------------------------------------------

InitialCondition InitialCondition::zero() { return {std::monostate{}, "zero"}; }

InitialCondition InitialCondition::sampled(Function fn, std::string label) {
  return {std::move(fn), std::move(label)};
}

InitialCondition InitialCondition::sin_2x() {
  return sampled([](double x1, double) { return std::sin(2.0 * x1); }, "sin2x");
}

InitialCondition InitialCondition::snapshot(RealField field, std::string label) {
  return {std::move(field), std::move(label)};
}

RealField InitialCondition::on(const GridSpec& grid) const {
  if (std::holds_alternative<std::monostate>(source_)) return RealField(grid);
  if (const auto* fn = std::get_if<Function>(&source_)) {
    return RealField::sample(grid, *fn);
  }
  const auto& f = std::get<RealField>(source_);
  require_same_grid(f.grid(), grid, "initial condition snapshot");
  return f;
}

// ---------------------------------------------------------------------------

RealField SolverState::real_field() const {
  if (!spectral_) return RealField(grid_, direct_);
  detail::RealFft fft(grid_);
  RealField out(grid_);
  fft.inverse(half_, out.values());
  const double scale = 1.0 / double(grid_.size());
  for (double& v : out.values()) v *= scale;
  return out;
}

SpectralField SolverState::spectral_field() const { return forward_dft(real_field()); }

// ---------------------------------------------------------------------------

ImexScheme::ImexScheme(const SchemeConfig& config, const GridSpec& grid)
    : config_(config), grid_(grid) {
  config_.validate();
  if (config_.steps < 1) throw Error(ErrorKind::config, "time stepping needs steps >= 1");
  const double dt = config_.dt();
  const double half_dt = 0.5 * dt;

  if (config_.equation == Equation::decoupled_ac) {
    if (std::abs(1.0 - config_.g * half_dt) < 1e-12) {
      throw Error(ErrorKind::singular_factor,
                  "decoupled scheme: g * dt = 2 makes the implicit factor vanish");
    }
    work_real_.resize(grid.size());
    return;
  }

  fft_ = std::make_unique<detail::RealFft>(grid);
  const std::size_t h = fft_->half_size();
  explicit_factor_.resize(h);
  inverse_implicit_.resize(h);
  cubic_mask_.assign(h, 1);
  for (std::size_t p = 0; p < h; ++p) {
    const double k2 = double(fft_->half_norm_sq(p));
    // Growth rate b of the linear part: du_hat = b u_hat dt + ...
    const double b = config_.equation == Equation::heat ? -(config_.g + config_.alpha * k2)
                                                        : config_.g - config_.alpha * k2;
    const double implicit = 1.0 - b * half_dt;
    if (std::abs(implicit) < 1e-12) {
      throw Error(ErrorKind::singular_factor,
                  "implicit factor 1 - (g - alpha|k|^2) dt/2 vanishes at |k|^2 = " +
                      std::to_string(static_cast<long long>(k2)));
    }
    explicit_factor_[p] = (1.0 + b * half_dt) / implicit;
    inverse_implicit_[p] = 1.0 / implicit;
    if (config_.equation == Equation::allen_cahn && config_.dealias) {
      auto k = fft_->half_wave_numbers(p);
      cubic_mask_[p] = two_thirds_masked(k, grid.n()) ? 0 : 1;
    }
  }
  work_half_.resize(h);
  noise_half_.resize(h);
  work_real_.resize(grid.size());
}

ImexScheme::~ImexScheme() = default;
ImexScheme::ImexScheme(ImexScheme&&) noexcept = default;
ImexScheme& ImexScheme::operator=(ImexScheme&&) noexcept = default;

SolverState ImexScheme::initial_state(const RealField& u0) const {
  require_same_grid(u0.grid(), grid_, "initial state");
  if (config_.equation == Equation::decoupled_ac) {
    SolverState s(grid_, false);
    s.direct_.assign(u0.values().begin(), u0.values().end());
    return s;
  }
  SolverState s(grid_, true);
  s.half_.resize(fft_->half_size());
  fft_->forward(u0.values(), s.half_);
  return s;
}

void ImexScheme::require(Equation eq, const char* op) const {
  if (config_.equation != eq) {
    throw Error(ErrorKind::config, std::string(op) + " called on a scheme configured for " +
                                       to_string(config_.equation));
  }
}

void ImexScheme::heat_step(SolverState& state, const NoiseIncrement& noise) {
  require(Equation::heat, "heat_step");
  require_same_grid(noise.field.grid(), grid_, "heat_step noise");
  spectral_linear_step(state, noise.field.values(), false);
}

void ImexScheme::allen_cahn_step(SolverState& state, const NoiseIncrement& noise) {
  require(Equation::allen_cahn, "allen_cahn_step");
  require_same_grid(noise.field.grid(), grid_, "allen_cahn_step noise");
  spectral_linear_step(state, noise.field.values(), true);
}

void ImexScheme::decoupled_step(SolverState& state, const NoiseIncrement& noise) {
  require(Equation::decoupled_ac, "decoupled_step");
  require_same_grid(noise.field.grid(), grid_, "decoupled_step noise");
  decoupled_kernel(state, noise.field.values());
}

void ImexScheme::step(SolverState& state, std::span<const double> noise) {
  switch (config_.equation) {
    case Equation::heat: spectral_linear_step(state, noise, false); break;
    case Equation::allen_cahn: spectral_linear_step(state, noise, true); break;
    case Equation::decoupled_ac: decoupled_kernel(state, noise); break;
  }
}

void ImexScheme::spectral_linear_step(SolverState& state, std::span<const double> noise,
                                      bool cubic) {
  const std::size_t h = work_half_.size();
  auto& u = state.half_;
  if (!cubic || config_.g == 0.0) {
    fft_->forward(noise, noise_half_);
    for (std::size_t p = 0; p < h; ++p) {
      u[p] = explicit_factor_[p] * u[p] + inverse_implicit_[p] * noise_half_[p];
    }
    ++state.step_;
    return;
  }

  const double gdt = config_.g * config_.dt();
  const double scale = 1.0 / double(grid_.size());
  fft_->inverse(u, work_real_);
  if (config_.dealias) {
    for (double& v : work_real_) {
      const double x = v * scale;
      v = x * x * x;
    }
    fft_->forward(work_real_, work_half_);
    fft_->forward(noise, noise_half_);
    for (std::size_t p = 0; p < h; ++p) {
      const Complex rhs = cubic_mask_[p] ? noise_half_[p] - gdt * work_half_[p]
                                         : noise_half_[p];
      u[p] = explicit_factor_[p] * u[p] + inverse_implicit_[p] * rhs;
    }
  } else {
    for (std::size_t j = 0; j < work_real_.size(); ++j) {
      const double x = work_real_[j] * scale;
      work_real_[j] = noise[j] - gdt * x * x * x;
    }
    fft_->forward(work_real_, work_half_);
    for (std::size_t p = 0; p < h; ++p) {
      u[p] = explicit_factor_[p] * u[p] + inverse_implicit_[p] * work_half_[p];
    }
  }
  ++state.step_;
}

void ImexScheme::decoupled_kernel(SolverState& state, std::span<const double> noise) const {
  const double gdt = config_.g * config_.dt();
  const double lhs = 1.0 / (1.0 - 0.5 * gdt);
  const double keep = 1.0 + 0.5 * gdt;
  auto& u = state.direct_;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = u[j];
    u[j] = (x * keep - gdt * x * x * x + noise[j]) * lhs;
  }
  ++state.step_;
}

// ---------------------------------------------------------------------------

namespace {

void require_finite(const RealField& f, const SchemeConfig& c) {
  if (!f.all_finite()) {
    throw Error(ErrorKind::numerical, std::string("non-finite field after integrating ") +
                                          to_string(c.equation) + " with dt = " +
                                          std::to_string(c.dt()));
  }
}

}  // namespace

IntegrationResult integrate(const SchemeConfig& config, const InitialCondition& ic,
                            const NoiseSpec& noise, const GridSpec& grid,
                            std::span<const std::int64_t> snapshot_steps) {
  config.validate();
  RealField u0 = ic.on(grid);
  std::set<std::int64_t> wanted(snapshot_steps.begin(), snapshot_steps.end());
  IntegrationResult result{u0, {}};
  if (wanted.count(0)) result.snapshots.push_back({0, 0.0, u0});
  if (config.steps == 0) return result;

  ImexScheme scheme(config, grid);
  SolverState state = scheme.initial_state(u0);
  NoiseSpec spec = noise;
  spec.sigma = config.sigma;
  NoisePath path(grid, spec, config.dt());
  std::vector<double> w(grid.size());
  for (std::int64_t m = 0; m < config.steps; ++m) {
    path.increment(std::uint64_t(m), w);
    scheme.step(state, w);
    if (wanted.count(m + 1)) {
      result.snapshots.push_back({m + 1, double(m + 1) * config.dt(), state.real_field()});
    }
  }
  result.final_field = state.real_field();
  require_finite(result.final_field, config);
  return result;
}

RealField integrate_on_path(const SchemeConfig& config, const RealField& u0,
                            NoisePath& path) {
  config.validate();
  if (config.steps == 0) return u0;
  if (std::abs(path.step_dt() - config.dt()) > 1e-12 * config.dt()) {
    throw Error(ErrorKind::config, "noise path step does not match the scheme time step");
  }
  ImexScheme scheme(config, u0.grid());
  SolverState state = scheme.initial_state(u0);
  std::vector<double> w(u0.size());
  for (std::int64_t m = 0; m < config.steps; ++m) {
    path.increment(std::uint64_t(m), w);
    scheme.step(state, w);
  }
  RealField out = state.real_field();
  require_finite(out, config);
  return out;
}

ConvergenceReport self_convergence_check(const SchemeConfig& config,
                                         const InitialCondition& ic,
                                         const NoiseSpec& noise, const GridSpec& grid) {
  config.validate();
  if (config.steps < 2 || config.steps % 2 != 0) {
    throw Error(ErrorKind::config, "self-convergence check needs an even number of steps");
  }
  NoiseSpec spec = noise;
  spec.sigma = config.sigma;
  const RealField u0 = ic.on(grid);
  const double fine_dt = 0.5 * config.dt();

  auto run = [&](std::int64_t steps, int factor) {
    SchemeConfig c = config;
    c.steps = steps;
    NoisePath path(grid, spec, fine_dt, factor);
    return integrate_on_path(c, u0, path);
  };
  const RealField coarse = run(config.steps / 2, 4);
  const RealField mid = run(config.steps, 2);
  const RealField fine = run(config.steps * 2, 1);

  auto l2_diff = [](const RealField& a, const RealField& b) {
    RealField d = a;
    for (std::size_t p = 0; p < d.size(); ++p) d[p] -= b[p];
    return std::sqrt(d.grid().cell_volume() *
                     std::inner_product(d.values().begin(), d.values().end(),
                                        d.values().begin(), 0.0));
  };
  ConvergenceReport r;
  r.diff_coarse = l2_diff(coarse, mid);
  r.diff_fine = l2_diff(mid, fine);
  r.ratio = (r.diff_coarse == 0.0 && r.diff_fine == 0.0)
                ? std::numeric_limits<double>::quiet_NaN()
                : r.diff_coarse / r.diff_fine;
  return r;
}

}  // namespace tspde
