#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "liesym/equations.hpp"
#include "liesym/generators.hpp"
#include "liesym/prolongation.hpp"
#include "liesym/sampling.hpp"

namespace liesym {

enum class Verdict { IdenticallyZero, ZeroOnVariety, MultiplierFound, Fails };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::IdenticallyZero:
      return "identically-zero";
    case Verdict::ZeroOnVariety:
      return "zero-on-variety";
    case Verdict::MultiplierFound:
      return "multiplier-found";
    case Verdict::Fails:
      return "fails";
  }
  return "?";
}

struct CheckReport {
  Verdict verdict = Verdict::Fails;
  int samples_passed = 0;
  std::optional<Polynomial> multiplier;
  std::optional<JetPoint> witness;
  std::optional<Rational> residual;
  int witness_index = -1;
  std::uint64_t seed = 0;
  double elapsed_ms = 0;

  bool passed() const { return verdict != Verdict::Fails; }
};

/// Evaluates pr v F on the solution variety: exact zero polynomial, then an
/// exact multiple of F, then `trials` sampled jet points (point k from
/// derive_seed(seed, k), so the verdict does not depend on `jobs`).
inline CheckReport infinitesimal_check(const PdeSystem& sys, const VectorField& v, int trials, std::uint64_t seed,
                                       int jobs = 1) {
  if (trials < 1) throw Error("trials must be at least 1");
  if (v.dim() != sys.n) throw Error("vector field dimension does not match the equation");
  auto start = std::chrono::steady_clock::now();
  CheckReport rep;
  rep.seed = seed;
  auto finish = [&] {
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
  };

  Polynomial r = apply_prolonged(v, sys.f, sys.order);
  if (r.is_zero()) {
    rep.verdict = Verdict::IdenticallyZero;
    return finish();
  }
  if (auto mu = divide_exact(r, sys.f)) {
    rep.verdict = Verdict::MultiplierFound;
    rep.multiplier = std::move(*mu);
    return finish();
  }

  std::vector<std::optional<std::pair<JetPoint, Rational>>> found(static_cast<std::size_t>(trials));
  std::atomic<int> first_fail{trials};
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < trials; k = next++) {
      if (k > first_fail.load()) break;
      JetPoint p = sample_point(sys, derive_seed(seed, static_cast<std::uint64_t>(k)));
      Rational val = evaluate(r, p.env);
      if (!val.is_zero()) {
        found[k] = std::make_pair(std::move(p), std::move(val));
        int cur = first_fail.load();
        while (k < cur && !first_fail.compare_exchange_weak(cur, k)) {
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::max(1, std::min(jobs, trials));
  std::exception_ptr err;
  std::mutex err_mu;
  for (int t = 1; t < workers; ++t) {
    pool.emplace_back([&] {
      try {
        worker();
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  try {
    worker();
  } catch (...) {
    std::lock_guard<std::mutex> lk(err_mu);
    if (!err) err = std::current_exception();
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);

  int k = first_fail.load();
  if (k < trials) {
    rep.verdict = Verdict::Fails;
    rep.witness_index = k;
    rep.witness = std::move(found[k]->first);
    rep.residual = std::move(found[k]->second);
    rep.samples_passed = k;
  } else {
    rep.verdict = Verdict::ZeroOnVariety;
    rep.samples_passed = trials;
  }
  return finish();
}

/// One report per generator, in basis order.
inline std::vector<CheckReport> check_generator_basis(const PdeSystem& sys, const GeneratorBasis& basis, int trials,
                                                      std::uint64_t seed, int jobs = 1) {
  std::vector<CheckReport> out;
  for (const auto& v : basis.fields) out.push_back(infinitesimal_check(sys, v, trials, seed, jobs));
  return out;
}

}  // namespace liesym
