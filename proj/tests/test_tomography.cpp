#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <sstream>

#include "cvrsp/homodyne.hpp"
#include "cvrsp/states.hpp"
#include "cvrsp/tomography.hpp"
#include "cvrsp/wigner.hpp"
#include "test_util.hpp"

using namespace cvrsp;
using std::numbers::pi;

namespace {

const std::vector<double> kPhases = default_phase_set(12);

MixedState odd_cat(int dim = 30) { return MixedState(cat(0.7, Parity::Odd, dim)); }

double recon_fidelity(const MleResult& r, const PureState& truth) {
  return fidelity(r.rho, resize(truth, r.rho.dim()));
}

}  // namespace

TEST_CASE("phase set") {
  const auto p = default_phase_set(4);
  REQUIRE(p.size() == 4);
  CHECK(p[1] == doctest::Approx(pi / 4));
  CHECK(p[3] == doctest::Approx(3 * pi / 4));
  CHECK_THROWS_AS(default_phase_set(0), std::invalid_argument);
}

TEST_CASE("sampling") {
  SUBCASE("vacuum variance") {
    const auto rec = sample_homodyne(MixedState(basis_state(0, 10)), kPhases, 100000, Efficiency(1.0), 7);
    double s = 0.0, s2 = 0.0;
    for (const auto& r : rec) {
      s += r.q;
      s2 += r.q * r.q;
    }
    const double mean = s / rec.size();
    CHECK(s2 / rec.size() - mean * mean == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("single photon has a hole at the origin") {
    const auto rec = sample_homodyne(MixedState(basis_state(1, 10)), kPhases, 100000, Efficiency(1.0), 8);
    const auto near = std::count_if(rec.begin(), rec.end(), [](const auto& r) { return std::abs(r.q) < 0.1; });
    CHECK(static_cast<double>(near) / rec.size() < 0.002);
    // integral of psi_1^2 over |q| < 0.1 is 2.65e-4
    CHECK(static_cast<double>(near) / rec.size() == doctest::Approx(2.6517e-4).epsilon(0.5));
  }
  SUBCASE("loss before detection fills the hole") {
    const auto rec = sample_homodyne(MixedState(basis_state(1, 10)), kPhases, 100000, Efficiency(0.5), 8);
    const auto near = std::count_if(rec.begin(), rec.end(), [](const auto& r) { return std::abs(r.q) < 0.1; });
    CHECK(static_cast<double>(near) / rec.size() > 0.01);
  }
  SUBCASE("determinism") {
    const auto a = sample_homodyne(odd_cat(), kPhases, 10000, Efficiency(0.9), 123);
    const auto b = sample_homodyne(odd_cat(), kPhases, 10000, Efficiency(0.9), 123);
    const auto c = sample_homodyne(odd_cat(), kPhases, 10000, Efficiency(0.9), 124);
    CHECK(a == b);
    CHECK_FALSE(a == c);
  }
  SUBCASE("independent of the thread count") {
    ::setenv("CVRSP_THREADS", "1", 1);
    const auto one = sample_homodyne(odd_cat(), kPhases, 20000, Efficiency(1.0), 5);
    ::setenv("CVRSP_THREADS", "4", 1);
    const auto four = sample_homodyne(odd_cat(), kPhases, 20000, Efficiency(1.0), 5);
    ::unsetenv("CVRSP_THREADS");
    CHECK(one == four);
  }
  SUBCASE("phases are drawn uniformly") {
    const auto rec = sample_homodyne(odd_cat(), kPhases, 60000, Efficiency(1.0), 9);
    std::vector<int> count(kPhases.size(), 0);
    for (const auto& r : rec) {
      for (std::size_t i = 0; i < kPhases.size(); ++i) {
        if (r.theta == kPhases[i]) ++count[i];
      }
    }
    for (int c : count) CHECK(std::abs(c - 5000) < 5 * std::sqrt(5000.0));
  }
  SUBCASE("chi-square goodness of fit against the marginal") {
    const MixedState rho(coherent(cplx(0.5, 0.3), 30));
    const std::vector<double> phases = {0.0, pi / 3};
    const int n = 200000;
    const auto rec = sample_homodyne(rho, phases, n, Efficiency(1.0), 77);
    const int bins = 40;
    const double lo = -5.0, width = 0.25;
    for (double theta : phases) {
      std::vector<int> obs(bins + 2, 0);
      int total = 0;
      for (const auto& r : rec) {
        if (r.theta != theta) continue;
        ++total;
        const int b = r.q < lo ? bins : (r.q >= lo + bins * width ? bins + 1 : int((r.q - lo) / width));
        ++obs[b];
      }
      const Marginal m = marginal(rho, theta);
      double chi2 = 0.0;
      int dof = -1;
      for (int b = 0; b < bins; ++b) {
        const double expect = total * m.probability(lo + b * width, lo + (b + 1) * width);
        if (expect < 5) continue;
        chi2 += (obs[b] - expect) * (obs[b] - expect) / expect;
        ++dof;
      }
      CAPTURE(theta);
      CHECK(chi2 < dof + 5 * std::sqrt(2.0 * dof));
    }
  }
  CHECK_THROWS_AS(sample_homodyne(odd_cat(), kPhases, 0, Efficiency(1.0), 1), std::invalid_argument);
}

TEST_CASE("reconstruction round trips") {
  const PureState truth = cat(0.7, Parity::Odd, 30);
  TomoConfig cfg;

  const auto clean = sample_homodyne(odd_cat(), kPhases, 50000, Efficiency(1.0), 1);
  const MleResult r = mle_reconstruct(clean, cfg);
  CHECK(r.converged);
  CHECK(recon_fidelity(r, truth) >= 0.995);
  CHECK(check_density_matrix(r.rho.matrix()).min_eigenvalue >= -1e-10);
  CHECK(std::abs(r.rho.matrix().trace().real() - 1.0) <= 1e-12);

  SUBCASE("log-likelihood never decreases") {
    REQUIRE(r.history.size() >= 2);
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1] - 1e-12);
    CHECK(r.log_likelihood == r.history.back());
    CHECK(log_likelihood(r.rho, clean, cfg) == doctest::Approx(r.log_likelihood).epsilon(1e-12));
  }
  SUBCASE("truth beats random challengers on its own data") {
    const MixedState t(resize(truth, cfg.dim_recon));
    const double own = log_likelihood(t, clean, cfg);
    CHECK(r.log_likelihood >= own);
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 10; ++k) {
      CHECK(own >= log_likelihood(testing::random_mixed(rng, cfg.dim_recon, 1 + k % 3, 6), clean, cfg));
    }
  }
  SUBCASE("bin width barely matters") {
    // enough samples that shot noise does not swamp the binning effect
    const auto big = sample_homodyne(odd_cat(), kPhases, 200000, Efficiency(1.0), 1);
    const double ref = recon_fidelity(mle_reconstruct(big, cfg), truth);
    for (double w : {0.05, 0.2}) {
      TomoConfig alt = cfg;
      alt.bin_width = w;
      CAPTURE(w);
      CHECK(std::abs(recon_fidelity(mle_reconstruct(big, alt), truth) - ref) <= 0.002);
    }
  }
  SUBCASE("iteration cap is reported") {
    TomoConfig capped = cfg;
    capped.max_iters = 3;
    const MleResult c = mle_reconstruct(clean, capped);
    CHECK_FALSE(c.converged);
    CHECK(c.iterations == 3);
    CHECK(c.history.size() == 4);
  }
}

TEST_CASE("efficiency correction") {
  const PureState truth = cat(0.7, Parity::Odd, 30);
  const auto lossy = sample_homodyne(odd_cat(), kPhases, 50000, Efficiency(0.85), 1);
  TomoConfig corrected;
  corrected.eta_correction = Efficiency(0.85);
  TomoConfig raw;
  const MleResult a = mle_reconstruct(lossy, corrected);
  const MleResult b = mle_reconstruct(lossy, raw);
  CHECK(recon_fidelity(a, truth) >= 0.98);
  CHECK(recon_fidelity(b, truth) < recon_fidelity(a, truth));
  CHECK(wigner_origin_parity(a.rho) < -0.10);
  CHECK(wigner_origin_parity(b.rho) > wigner_origin_parity(a.rho));
}

TEST_CASE("reconstruction errors") {
  TomoConfig cfg;
  const std::vector<HomodyneRecord> none;
  CHECK_THROWS_AS(mle_reconstruct(none, cfg), std::invalid_argument);
  const std::vector<HomodyneRecord> stray = {{0.1234, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(mle_reconstruct(stray, cfg), std::invalid_argument);
  const std::vector<HomodyneRecord> single = {{0.0, 0.01}, {0.0, 0.02}, {0.0, 0.03}};
  CHECK_THROWS_AS(mle_reconstruct(single, cfg), NumericalError);
  TomoConfig bad;
  bad.bin_width = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.dim_recon = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("zero-probability sentinel") {
  TomoConfig cfg;
  // an outcome far outside the region any of these states can reach
  const std::vector<HomodyneRecord> rec = {{0.0, 50.0}, {0.0, 0.0}};
  for (int n : {0, 1, 2, 5}) {
    CHECK(log_likelihood(MixedState(basis_state(n, cfg.dim_recon)), rec, cfg) ==
          -std::numeric_limits<double>::infinity());
  }
  const std::vector<HomodyneRecord> fine = {{0.0, 1.0}, {0.0, 0.0}};
  CHECK(std::isfinite(log_likelihood(MixedState(basis_state(0, cfg.dim_recon)), fine, cfg)));
  CHECK_THROWS_AS(log_likelihood(MixedState(basis_state(0, 5)), fine, cfg), std::invalid_argument);
}

TEST_CASE("record files") {
  const std::vector<HomodyneRecord> rec = {{0.0, -1.25}, {pi / 12, 0.1}, {0.5, 3.0}};
  std::ostringstream out;
  write_records_csv(out, rec);
  const std::string text = out.str();
  CHECK(text.rfind("theta_rad,q\n0,-1.25\n0.26179938779914941,0.10000000000000001\n", 0) == 0);
  std::istringstream in(text);
  CHECK(read_records_csv(in) == rec);

  std::istringstream bad_header("theta,q\n0,1\n");
  CHECK_THROWS_AS(read_records_csv(bad_header), std::invalid_argument);
  std::istringstream bad_value("theta_rad,q\n0,abc\n");
  CHECK_THROWS_AS(read_records_csv(bad_value), std::invalid_argument);
  std::istringstream trailing("theta_rad,q\n0,1x\n");
  CHECK_THROWS_AS(read_records_csv(trailing), std::invalid_argument);
}

TEST_CASE("reconstruction json") {
  const auto rec = sample_homodyne(odd_cat(), kPhases, 5000, Efficiency(1.0), 3);
  TomoConfig cfg;
  cfg.dim_recon = 4;
  const MleResult r = mle_reconstruct(rec, cfg);
  const nlohmann::json j = reconstruction_json(r);
  CHECK(j["dim"] == 4);
  CHECK(j["rho"].size() == 16);
  CHECK(j["rho"][0].size() == 2);
  CHECK(j["iterations"] == r.iterations);
  CHECK(j["converged"] == r.converged);
  CHECK(j["rho"][5][0].get<double>() == r.rho(1, 1).real());
}
