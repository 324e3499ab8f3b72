#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ultranorm/diagonal_norm.hpp"
#include "ultranorm/operations.hpp"
#include "ultranorm/oracles.hpp"
#include "ultranorm/parallel.hpp"
#include "ultranorm/spectral.hpp"

namespace ultranorm {

struct CheckTally {
  std::size_t passed = 0;
  std::size_t failed = 0;
  bool ok() const { return failed == 0; }
};

struct TheoremAConfig {
  std::uint64_t seed = 1;
  std::size_t instances = 500;
  std::size_t max_dim = 6;
  std::vector<long> primes{2, 3, 5};
  long denominator_bound = 4;
  std::size_t samples = 20;  // sampled vectors per instance
};

/// Random quadruples (nu0, nu0', alpha, alpha') checked against the
/// contractivity and additivity properties of the action.
struct TheoremAReport {
  // name -> tally. Keys:
  //   d1_contractive, dinf_contractive, vol_additive, gauge_bound: always hold;
  //   filtration_recovered: weight_{nu0.alpha}(v) - weight_alpha(v) == weight_nu0(v).
  std::map<std::string, CheckTally> checks;
  std::size_t instances_with_unrecovered_filtration = 0;
};

inline TheoremAReport run_theorem_a(const TheoremAConfig& cfg) {
  struct Local {
    bool d1, dinf, vol;
    std::size_t gauge_ok = 0, gauge_bad = 0, rec_ok = 0, rec_bad = 0;
  };
  std::vector<Local> results(cfg.instances);
  parallel_for(cfg.instances, [&](std::size_t k) {
    InstanceGenerator gen(cfg.seed * 1000003ULL + k);
    const std::size_t n = 1 + static_cast<std::size_t>(gen.uniform(0, static_cast<long>(cfg.max_dim) - 1));
    const long p = cfg.primes[static_cast<std::size_t>(gen.uniform(0, static_cast<long>(cfg.primes.size()) - 1))];
    const FieldSpec field = FieldSpec::padic(p);
    const DiagonalNorm nu0 = gen.norm(field, Mode::filtration, n, cfg.denominator_bound);
    const DiagonalNorm nu0p = gen.norm(field, Mode::filtration, n, cfg.denominator_bound);
    const DiagonalNorm alpha = gen.norm(field, Mode::norm, n, cfg.denominator_bound);
    const DiagonalNorm alphap = gen.norm(field, Mode::norm, n, cfg.denominator_bound);
    const DiagonalNorm act = gerardin_apply(nu0, alpha);
    const DiagonalNorm actp = gerardin_apply(nu0p, alphap);
    Local r{};
    r.d1 = d_1(act, actp) <= d_1(nu0, nu0p) + d_1(alpha, alphap);
    r.dinf = d_inf(act, actp) <= d_inf(nu0, nu0p) + d_inf(alpha, alphap);
    r.vol = volume(act, actp) == volume(nu0, nu0p) + volume(alpha, alphap);
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      const Vector v = gen.vector(n, p);
      const ExtRat wa = act.eval_weight(v);
      const ExtRat w0 = nu0.eval_weight(v);
      const ExtRat wal = alpha.eval_weight(v);
      (wa >= w0 + wal ? r.gauge_ok : r.gauge_bad)++;
      (wa.value() - wal.value() == w0.value() ? r.rec_ok : r.rec_bad)++;
    }
    results[k] = r;
  });
  TheoremAReport out;
  for (const auto& r : results) {
    (r.d1 ? out.checks["d1_contractive"].passed : out.checks["d1_contractive"].failed)++;
    (r.dinf ? out.checks["dinf_contractive"].passed : out.checks["dinf_contractive"].failed)++;
    (r.vol ? out.checks["vol_additive"].passed : out.checks["vol_additive"].failed)++;
    out.checks["gauge_bound"].passed += r.gauge_ok;
    out.checks["gauge_bound"].failed += r.gauge_bad;
    out.checks["filtration_recovered"].passed += r.rec_ok;
    out.checks["filtration_recovered"].failed += r.rec_bad;
    if (r.rec_bad) ++out.instances_with_unrecovered_filtration;
  }
  return out;
}

}  // namespace ultranorm
