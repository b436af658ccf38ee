// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <cstdio>
#include <string>
#include <vector>

#include "dunkl/verify.hpp"

using namespace dunkl;

namespace {

constexpr std::uint64_t kSeed = 2026;
int failures = 0;

void line(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::printf("criterion %2d  %-28s %s  (%s)\n", idx, name.c_str(), pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string stat(const VerificationReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "worst %.3g vs threshold %.3g, %zu samples, %.1fs",
                r.worst_ratio, r.threshold, r.sample_count, r.runtime_seconds);
  return buf;
}

KernelUnderTest make_kernel(KernelFamily fam, MultiplicityVector lam) {
  KernelUnderTest k;
  k.family = fam;
  k.eta = SignVector::zero(lam.dim());
  k.M = std::vector<int>(lam.dim(), 0);
  k.gamma = 1.0;
  switch (fam) {
    case KernelFamily::g_function:
      k.K = 1;
      break;
    case KernelFamily::riesz:
      k.M[0] = 1;
      break;
    case KernelFamily::lusin:
    case KernelFamily::poisson_lusin: {
      k.K = 1;
      double lmin = lam[0];
      for (std::size_t j = 1; j < lam.dim(); ++j) lmin = std::min(lmin, lam[j]);
      k.gamma = std::min(0.5, 0.9 * (lmin + 0.5));
      k.t_points = 60;
      break;
    }
    default:
      break;
  }
  k.lambda = std::move(lam);
  return k;
}

}  // namespace

int main() {
  // 1-2: transform isometry and inversion over the 20-function suite
  auto pl = check_plancherel(kSeed);
  line(1, "plancherel", pl.pass, stat(pl));
  auto inv = check_inversion(kSeed);
  line(2, "inversion", inv.pass, stat(inv));

  // 3: Laplacian eigenfunction identity at 10^3 samples
  auto eig = check_eigenfunction(kSeed, 1000);
  line(3, "eigenfunction", eig.pass, stat(eig));

  // 4: classical lambda=0 closed forms (heat full + reflected, Poisson)
  auto cl = check_classical(kSeed);
  line(4, "classical_reduction", cl.pass, stat(cl));

  // 5: product vs integral kernel representation, Omega order 64, 10^3 samples
  auto bhk = check_bhk(kSeed, 1000, 64);
  line(5, "kernel_representation", bhk.pass, stat(bhk));

  // 6: semigroup law and unit mass
  auto sg = check_semigroup_mass(kSeed);
  line(6, "semigroup_mass", sg.pass, stat(sg));

  // 7: intertwining, all (eta, M <= 3), 10 random (lambda, z, x)
  auto tw = check_intertwine(kSeed, 10);
  line(7, "intertwining", tw.pass, stat(tw));

  // 8: g-function constants and Riesz spectral contraction
  auto gc = check_g_constants(kSeed);
  line(8, "g_constants", gc.pass, stat(gc));

  // 9: Poisson kernel subordination vs spectral route
  auto sub = check_subordination(kSeed);
  line(9, "subordination", sub.pass, stat(sub));

  // 10: exact inequalities at 10^5 admissible samples, n = 1 and 2
  {
    bool ok = true;
    std::size_t violations = 0;
    double secs = 0.0;
    for (int n : {1, 2}) {
      LemmaConfig cfg;
      cfg.count = 100000;
      cfg.seed = kSeed;
      cfg.lambda = n == 1 ? MultiplicityVector{0.2} : MultiplicityVector{-0.3, 0.5};
      cfg.eta = SignVector::zero(n);
      for (const char* name : {"theta", "qz", "xiineq"}) {
        auto rep = lemma_suite(name, cfg);
        ok = ok && rep.pass;
        violations += (std::size_t)rep.worst_ratio;
        secs += rep.runtime_seconds;
      }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%zu violations across 6x10^5 samples, %.1fs", violations,
                  secs);
    line(10, "exact_inequalities", ok, buf);
  }

  // 11: growth and smoothness for the six kernel families plus Poisson-Lusin
  {
    bool ok = true;
    double worst = 0.0, secs = 0.0;
    std::size_t checks = 0;
    KernelFamily fams[] = {KernelFamily::heat_maximal,       KernelFamily::g_function,
                           KernelFamily::laplace_multiplier, KernelFamily::stieltjes_multiplier,
                           KernelFamily::riesz,              KernelFamily::lusin,
                           KernelFamily::poisson_lusin};
    auto run = [&](const KernelUnderTest& k, std::size_t count) {
      CheckConfig cfg;
      cfg.count = count;
      cfg.seed = kSeed;
      for (auto rep : {growth_check(k, cfg), smoothness_check(k, SmoothnessSide::x_arg, cfg),
                       smoothness_check(k, SmoothnessSide::y_arg, cfg)}) {
        ok = ok && rep.pass;
        worst = std::max(worst, rep.worst_ratio);
        secs += rep.runtime_seconds;
        ++checks;
      }
    };
    for (double lam : {-0.3, 0.2, 1.7})
      for (KernelFamily fam : fams)
        run(make_kernel(fam, MultiplicityVector{lam}),
            fam == KernelFamily::poisson_lusin ? 40 : 120);
    run(make_kernel(KernelFamily::heat_maximal, MultiplicityVector{-0.3, 0.5}), 120);
    run(make_kernel(KernelFamily::lusin, MultiplicityVector{-0.3, 0.5}), 60);
    char buf[120];
    std::snprintf(buf, sizeof buf, "%zu checks, worst decade ratio %.3g vs 8, %.1fs", checks,
                  worst, secs);
    line(11, "standard_estimates", ok, buf);
  }

  // 12: Lusin / g-function norm equivalence across apertures
  auto lg = check_lusin_equivalence(kSeed);
  line(12, "lusin_g_equivalence", lg.pass, stat(lg));

  // 13: negative controls must be detected as failures
  {
    auto bad_bhk = check_bhk(kSeed, 300, 64, 1.1);
    auto bad_pl = check_plancherel(kSeed, 1.1);
    bool ok = !bad_bhk.pass && !bad_pl.pass;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "perturbed kernel constant worst %.3g, perturbed measure worst %.3g: both "
                  "detected=%s",
                  bad_bhk.worst_ratio, bad_pl.worst_ratio, ok ? "yes" : "no");
    line(13, "negative_controls", ok, buf);
  }

  if (failures == 0)
    std::printf("all 13 criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
