#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "tspde/error.hpp"
#include "tspde/field_io.hpp"
#include "tspde/spectral.hpp"

using namespace tspde;

namespace {

constexpr double pi = std::numbers::pi;

RealField random_field(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  RealField f(g);
  for (double& v : f.values()) v = nd(rng);
  return f;
}

// O(N^{2d}) evaluation of N^{-d/2} sum_j u(x_j) exp(+2 pi i k.j / N).
SpectralField brute_dft(const RealField& f) {
  const GridSpec& g = f.grid();
  SpectralField out(g);
  const double scale = std::pow(double(g.n()), -g.dim() / 2.0);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto k = g.multi_index(p);
    Complex acc;
    for (std::size_t q = 0; q < g.size(); ++q) {
      const auto j = g.multi_index(q);
      const double phase = 2.0 * pi * (k[0] * j[0] + k[1] * j[1]) / g.n();
      acc += f[q] * Complex(std::cos(phase), std::sin(phase));
    }
    out[p] = scale * acc;
  }
  return out;
}

double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("grid spec") {
  const GridSpec g(2, 64);
  CHECK(g.dx() * g.n() == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK(g.rho() == doctest::Approx(std::pow(64 / (2.0 * pi), 2)).epsilon(1e-14));
  CHECK(g.rho() * g.dx() * g.dx() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.size() == 4096);
  CHECK(g.coordinate(0, 0) == doctest::Approx(-pi));
  CHECK_THROWS_AS(GridSpec(2, 7), Error);
  CHECK_THROWS_AS(GridSpec(3, 8), Error);
  CHECK_THROWS_AS(GridSpec(1, 0), Error);
}

TEST_CASE("forward dft against direct summation") {
  for (int d : {1, 2}) {
    const GridSpec g(d, d == 1 ? 16 : 8);
    const RealField f = random_field(g, 7 + d);
    const SpectralField fast = forward_dft(f);
    const SpectralField slow = brute_dft(f);
    CHECK(max_diff(fast.coeffs(), slow.coeffs()) < 1e-12);
  }
}

TEST_CASE("forward dft examples") {
  const GridSpec g(2, 8);
  SUBCASE("zero field") {
    const auto F = forward_dft(RealField(g));
    CHECK(F.max_abs() == 0.0);
  }
  SUBCASE("constant one") {
    const auto F = forward_dft(RealField::sample(g, [](double, double) { return 1.0; }));
    CHECK(F.at({0, 0}).real() == doctest::Approx(8.0).epsilon(1e-14));
    double rest = 0.0;
    for (std::size_t p = 0; p < F.size(); ++p) {
      if (p != g.position({0, 0})) rest = std::max(rest, std::abs(F[p]));
    }
    CHECK(rest < 1e-13);
  }
  SUBCASE("sin x1") {
    const auto F =
        forward_dft(RealField::sample(g, [](double x1, double) { return std::sin(x1); }));
    CHECK(std::norm(F.at({1, 0})) == doctest::Approx(64.0 / 4.0).epsilon(1e-13));
    CHECK(std::norm(F.at({-1, 0})) == doctest::Approx(64.0 / 4.0).epsilon(1e-13));
    CHECK(std::abs(F.at({1, 0}) - std::conj(F.at({-1, 0}))) < 1e-13);
    CHECK(std::abs(F.at({1, 0}) + F.at({-1, 0})) < 1e-13);
    double rest = 0.0;
    for (std::size_t p = 0; p < F.size(); ++p) {
      const auto k = g.multi_index(p);
      if (!(std::abs(k[0]) == 1 && k[1] == 0)) rest = std::max(rest, std::abs(F[p]));
    }
    CHECK(rest < 1e-13);
  }
  SUBCASE("hermitian output") {
    const auto F = forward_dft(random_field(g, 3));
    CHECK(F.hermitian_defect() == 0.0);
  }
}

TEST_CASE("inverse dft") {
  const GridSpec g(2, 8);
  SUBCASE("zero") { CHECK(inverse_dft(SpectralField(g)).max_abs() == 0.0); }
  SUBCASE("dc mode") {
    SpectralField F(g);
    F.at({0, 0}) = 8.0;
    const RealField f = inverse_dft(F);
    for (double v : f.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("non-hermitian rejected") {
    SpectralField F(g);
    F.at({1, 2}) = Complex(1.0, 0.5);
    try {
      (void)inverse_dft(F);
      FAIL("expected symmetry violation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::symmetry_violation);
    }
  }
}

TEST_CASE("round trip and parseval") {
  for (int d : {1, 2}) {
    for (int n = 8; n <= 1024; n *= 2) {
      const GridSpec g(d, n);
      const RealField f = random_field(g, unsigned(n + d));
      const RealField back = inverse_dft(forward_dft(f));
      double err = 0.0;
      for (std::size_t p = 0; p < f.size(); ++p) err = std::max(err, std::abs(back[p] - f[p]));
      CHECK(err < 1e-12);
      CHECK(err <= 10.0 * std::numeric_limits<double>::epsilon() * f.max_abs() * 10.0);

      double grid_sum = 0.0;
      for (double v : f.values()) grid_sum += v * v;
      grid_sum *= g.cell_volume();
      const double norm_sq = sobolev_norm_sq(f, {0.0});
      CHECK(std::abs(norm_sq - grid_sum) < 1e-10 * std::sqrt(norm_sq));
    }
  }
}

TEST_CASE("discrete sobolev norm examples") {
  const GridSpec g(2, 16);
  const RealField c = RealField::sample(g, [](double, double) { return 0.7; });
  for (double s : {-1.0, 0.0, 1.5}) {
    CHECK(sobolev_norm_sq(c, {s}) == doctest::Approx(4 * pi * pi * 0.49).epsilon(1e-13));
  }
  const RealField sn = RealField::sample(g, [](double x1, double) { return std::sin(x1); });
  CHECK(sobolev_norm_sq(sn, {0.0}) == doctest::Approx(2 * pi * pi).epsilon(1e-13));
  CHECK(sobolev_norm_sq(sn, {1.0}) == doctest::Approx(4 * pi * pi).epsilon(1e-13));
  CHECK(discrete_sobolev_norm(sn, {0.0}) == doctest::Approx(std::sqrt(2.0) * pi).epsilon(1e-13));
  CHECK(sobolev_norm_sq(RealField(g), {2.0}) == 0.0);
}

TEST_CASE("sobolev norm is monotone in s") {
  const GridSpec g(2, 32);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const RealField f = random_field(g, seed);
    double prev = 0.0;
    for (double s = -2.0; s <= 2.0; s += 0.25) {
      const double v = discrete_sobolev_norm(f, {s});
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("radial binning") {
  SUBCASE("annulus cardinalities by enumeration") {
    long long a1 = 0, a2 = 0;
    for (int k1 = -4; k1 <= 4; ++k1) {
      for (int k2 = -4; k2 <= 4; ++k2) {
        const double r = std::hypot(k1, k2);
        const int kappa = std::max(1, int(std::ceil(r - 1e-12)));
        a1 += kappa == 1;
        a2 += kappa == 2;
      }
    }
    CHECK(a1 == 5);
    CHECK(a2 == 8);
    const auto R = radial_energy_density(SpectralField(GridSpec(2, 16)));
    CHECK(R.bins[0].cardinality == 5);
    CHECK(R.bins[1].cardinality == 8);
  }
  SUBCASE("partition of the square grid") {
    for (int n : {8, 16, 64, 256}) {
      const auto R = radial_energy_density(SpectralField(GridSpec(2, n)));
      long long total = 0;
      for (const auto& b : R.bins) total += b.cardinality;
      CHECK(total == 1LL * n * n);
      CHECK(int(R.bins.size()) == int(std::ceil(n / std::sqrt(2.0))));
      for (std::size_t i = 0; i < R.bins.size(); ++i) CHECK(R.bins[i].kappa == int(i) + 1);
      for (const auto& b : R.bins) CHECK(b.energy == 0.0);
    }
  }
  SUBCASE("sin x1 puts all energy in bin 1") {
    const GridSpec g(2, 8);
    const auto R = radial_energy_density(
        forward_dft(RealField::sample(g, [](double x1, double) { return std::sin(x1); })));
    CHECK(R.bins[0].energy == doctest::Approx((2.0 * 64 / 4.0) / 5.0 / g.rho()).epsilon(1e-13));
    for (std::size_t i = 1; i < R.bins.size(); ++i) CHECK(R.bins[i].energy < 1e-26);
  }
  SUBCASE("d = 1 unsupported") {
    try {
      (void)radial_energy_density(SpectralField(GridSpec(1, 8)));
      FAIL("expected unsupported dimension");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::unsupported_dimension);
    }
  }
}

TEST_CASE("binned sobolev norm") {
  const GridSpec g(2, 16);
  RadialSpectrum R = radial_energy_density(SpectralField(g));
  CHECK(binned_sobolev_norm(R, {1.0}) == 0.0);
  R.bins[0].energy = 0.3;
  CHECK(binned_sobolev_norm(R, {0.0}) == doctest::Approx(0.3));
  CHECK(binned_sobolev_norm(R, {2.0}) == doctest::Approx(0.3 * 4.0));

  // binned/exact at s = 0 is a cardinality-weighted mean of kappa / |A_kappa|.
  for (int n = 16; n <= 256; n *= 2) {
    const GridSpec gn(2, n);
    const auto F = forward_dft(random_field(gn, unsigned(n)));
    const auto Rn = radial_energy_density(F);
    double lo = 1e300, hi = 0.0;
    for (const auto& b : Rn.bins) {
      lo = std::min(lo, double(b.kappa) / double(b.cardinality));
      hi = std::max(hi, double(b.kappa) / double(b.cardinality));
    }
    const double ratio = binned_sobolev_norm(Rn, {0.0}) / sobolev_norm_sq(F, {0.0});
    CHECK(ratio >= lo * (1 - 1e-12));
    CHECK(ratio <= hi * (1 + 1e-12));
  }
}

TEST_CASE("two-thirds dealiasing") {
  const GridSpec g(2, 8);
  SpectralField ones(g);
  for (auto& c : ones.coeffs()) c = 1.0;
  const auto D = two_thirds_dealias(ones);
  int survivors = 0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto k = g.multi_index(p);
    const bool keep = std::abs(k[0]) < 3 && std::abs(k[1]) < 3;
    CHECK((D[p] != Complex{}) == keep);
    survivors += keep;
  }
  CHECK(survivors == 25);

  const GridSpec g2(2, 32);
  const auto F = forward_dft(random_field(g2, 11));
  const auto once = two_thirds_dealias(F);
  const auto twice = two_thirds_dealias(once);
  CHECK(max_diff(once.coeffs(), twice.coeffs()) == 0.0);
  CHECK(sobolev_norm_sq(once, {0.0}) <= sobolev_norm_sq(F, {0.0}));
  // Orthogonal projection: the removed part is orthogonal to the kept part.
  double cross = 0.0;
  for (std::size_t p = 0; p < F.size(); ++p) cross += std::real(std::conj(once[p]) * (F[p] - once[p]));
  CHECK(std::abs(cross) < 1e-12);
  CHECK(max_diff(two_thirds_dealias(once).coeffs(), once.coeffs()) == 0.0);
}

TEST_CASE("pairing with test functions") {
  const GridSpec g(2, 32);
  auto one = RealField::sample(g, [](double, double) { return 1.0; });
  CHECK(pair_with_test_function(one, one) == doctest::Approx(4 * pi * pi).epsilon(1e-14));
  const int M = 32 / 4;
  auto fast = RealField::sample(g, [M](double x1, double) { return std::sin(M * x1); });
  auto smooth = RealField::sample(g, [](double x1, double) { return std::cos(x1); });
  CHECK(std::abs(pair_with_test_function(fast, smooth)) < 1e-10);
  auto sn = RealField::sample(g, [](double x1, double) { return std::sin(x1); });
  CHECK(pair_with_test_function(sn, sn) == doctest::Approx(2 * pi * pi).epsilon(1e-13));

  const auto a = random_field(g, 1), b = random_field(g, 2), c = random_field(g, 3);
  RealField ab(g);
  for (std::size_t p = 0; p < g.size(); ++p) ab[p] = 2.0 * a[p] - 0.5 * b[p];
  CHECK(pair_with_test_function(a, b) == doctest::Approx(pair_with_test_function(b, a)));
  CHECK(pair_with_test_function(ab, c) ==
        doctest::Approx(2.0 * pair_with_test_function(a, c) -
                        0.5 * pair_with_test_function(b, c)));
  try {
    (void)pair_with_test_function(a, RealField(GridSpec(2, 16)));
    FAIL("expected grid mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::grid_mismatch);
  }
}

TEST_CASE("interval averages") {
  const GridSpec g(2, 32);
  const auto one = RealField::sample(g, [](double, double) { return 1.0; });
  for (double v : interval_averages(one, 4)) CHECK(v == doctest::Approx(pi * pi).epsilon(1e-14));

  const auto s2 = RealField::sample(g, [](double x1, double) { return std::sin(2 * x1); });
  const auto avg = interval_averages(s2, 4);
  // Direct Riemann sums over each strip.
  const int width = 32 / 4;
  for (int k = 0; k < 4; ++k) {
    double sum = 0.0;
    for (int i = k * width; i < (k + 1) * width; ++i) {
      for (int j = 0; j < 32; ++j) sum += s2[std::size_t(i) * 32 + std::size_t(j)];
    }
    CHECK(avg[std::size_t(k)] == doctest::Approx(sum * g.cell_volume()).epsilon(1e-13));
  }
  // sin(2 x1) has a half period per strip, so each strip carries about
  // +-(1/2)(2 pi) of mass rather than 0.
  for (int k = 0; k < 4; ++k) CHECK(std::abs(avg[std::size_t(k)]) == doctest::Approx(2 * pi).epsilon(0.02));

  double total = 0.0;
  for (double v : interval_averages(s2, 8)) total += v;
  CHECK(total == doctest::Approx(pair_with_test_function(s2, one)).epsilon(1e-12).scale(1.0));
  CHECK_THROWS_AS(interval_averages(s2, 5), Error);
  CHECK_THROWS_AS(interval_averages(RealField(GridSpec(1, 32)), 4), Error);
}

TEST_CASE("snapshot and radial csv round trip") {
  const GridSpec g(2, 16);
  const auto f = random_field(g, 5);
  std::stringstream ss;
  write_snapshot(f, ss);
  CHECK(ss.str().size() == 16 + 8 * g.size());
  CHECK(ss.str().substr(0, 4) == "TSPD");
  const RealField back = read_snapshot(ss);
  CHECK(back.grid() == g);
  for (std::size_t p = 0; p < g.size(); ++p) CHECK(back[p] == f[p]);

  std::stringstream bad("XXXX0000000000000000");
  try {
    (void)read_snapshot(bad);
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }

  auto R = radial_energy_density(forward_dft(f));
  R.bins[2].std_error = 0.125;
  std::stringstream csv;
  write_radial_csv(R, csv);
  CHECK(csv.str().rfind("kappa,energy,cardinality,stderr\n", 0) == 0);
  const auto R2 = read_radial_csv(csv, g);
  REQUIRE(R2.bins.size() == R.bins.size());
  for (std::size_t i = 0; i < R.bins.size(); ++i) {
    CHECK(R2.bins[i].energy == R.bins[i].energy);
    CHECK(R2.bins[i].cardinality == R.bins[i].cardinality);
    CHECK(R2.bins[i].std_error.has_value() == R.bins[i].std_error.has_value());
  }
  const auto cl = clamped(f, -0.5, 0.5);
  CHECK(cl.max_abs() <= 0.5);
}
