#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "switchsim/policies.hpp"

using namespace switchsim;

namespace {

// One slot of the simulator loop with caller-chosen arrivals.
ServiceOutcome step(Policy& policy, SwitchState& st, const ArrivalMatrix& a, Schedule* chosen = nullptr) {
  const auto d = policy.decide(st);
  if (chosen) *chosen = d.schedule;
  const auto out = st.apply_schedule(d.schedule, d.filter);
  policy.on_service(st, out);
  st.inject_arrivals(a, policy.tag(st.slot()));
  policy.on_arrivals(st.slot(), a);
  st.advance();
  return out;
}

ArrivalMatrix ones(std::size_t n) {
  ArrivalMatrix a(n);
  for (auto& b : a.bits()) b = 1;
  return a;
}

PolicyParams tiny_params(std::size_t n, Count b, Count d, Count s, std::vector<Count> subintervals) {
  PolicyParams p;
  p.n = n;
  p.rho = 0.5;
  p.b = b;
  p.d = d;
  p.s = s;
  p.subintervals = std::move(subintervals);
  p.ell = p.subintervals.size() - 1;
  return p;
}

PolicyConstants with(double c_b, double c_d, double c_s, double c_f, ParamMode mode) {
  return {c_b, c_d, c_s, c_f, mode};
}

}  // namespace

TEST_SUITE("params") {
  TEST_CASE("theoretical preset meets its constant conditions") {
    const auto c = PolicyConstants::theoretical_preset();
    CHECK(c.violation().empty());
    CHECK(c.c_b - std::sqrt(c.c_s * c.c_b) >= 1.0);
    CHECK(std::pow(c.c_d, 1.5) >= 76 * c.c_b);
    // Each constant is the smallest integer that works with the others fixed.
    CHECK_FALSE(with(31, 181, 30, 304, ParamMode::theoretical).violation().empty());
    CHECK_FALSE(with(32, 180, 30, 304, ParamMode::theoretical).violation().empty());
    CHECK_FALSE(with(32, 181, 29, 304, ParamMode::theoretical).violation().empty());
    CHECK(PolicyConstants::adaptive_preset().violation().empty());
  }

  TEST_CASE("theoretical preset at n=10, rho=0.9 is out of regime") {
    CHECK_THROWS_AS(derive_params(10, 0.9, PolicyConstants::theoretical_preset()), InvalidRegime);
  }

  TEST_CASE("adaptive example") {
    const auto p = derive_params(10, 0.9, with(4, 1, 1, 304, ParamMode::adaptive));
    CHECK(p.f == doctest::Approx(10.0));
    CHECK(p.b == 922);
    CHECK(p.s == 876);
    CHECK(p.d == 50);
    CHECK(p.backlog_phase() == 46);
    CHECK(p.c_r == doctest::Approx(2.0));
  }

  TEST_CASE("pure function") {
    const auto a = derive_params(16, 0.85, PolicyConstants::adaptive_preset());
    const auto b = derive_params(16, 0.85, PolicyConstants::adaptive_preset());
    CHECK(a.b == b.b);
    CHECK(a.d == b.d);
    CHECK(a.s == b.s);
    CHECK(a.subintervals == b.subintervals);
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(derive_params(1, 0.5, PolicyConstants::adaptive_preset()), ParameterError);
    CHECK_THROWS_AS(derive_params(4, 1.0, PolicyConstants::adaptive_preset()), ParameterError);
    CHECK_THROWS_AS(derive_params(4, 0.0, PolicyConstants::adaptive_preset()), ParameterError);
  }

  TEST_CASE("named conditions") {
    try {
      derive_params(10, 0.9, PolicyConstants::theoretical_preset());
      FAIL("expected InvalidRegime");
    } catch (const InvalidRegime& e) {
      CHECK(e.condition() == "lower-envelope phase b - d >= 1");
    }
    try {
      derive_params(3, 0.9999, PolicyConstants::theoretical_preset());
      FAIL("expected InvalidRegime");
    } catch (const InvalidRegime& e) {
      CHECK(e.condition() == "n >= 4");
    }
  }

  TEST_CASE("phases tile the batch") {
    for (std::size_t n : {2, 4, 8, 16, 64})
      for (double rho : {0.5, 0.7, 0.8, 0.85, 0.9, 0.95}) {
        PolicyParams p;
        try {
          p = derive_params(n, rho, PolicyConstants::adaptive_preset());
        } catch (const InvalidRegime&) {
          continue;
        }
        CHECK(p.envelope_phase() + p.normal_clearing_phase() + p.backlog_phase() == p.b);
        CHECK(p.envelope_phase() >= 1);
        CHECK(p.normal_clearing_phase() >= 1);
        CHECK(p.backlog_phase() >= 1);
        CHECK(std::accumulate(p.subintervals.begin(), p.subintervals.end(), Count{0}) == p.b);
        CHECK(p.subintervals.front() == p.d);
      }
  }

  TEST_CASE("constants file") {
    std::istringstream in("# tuned\nc_b = 9\nc_f=2.5  # slack\nmode = theoretical\n");
    const auto c = parse_constants(in, PolicyConstants::adaptive_preset());
    CHECK(c.c_b == 9.0);
    CHECK(c.c_f == 2.5);
    CHECK(c.c_d == PolicyConstants::adaptive_preset().c_d);
    CHECK(c.mode == ParamMode::theoretical);
    std::istringstream bad("c_x = 1\n");
    CHECK_THROWS_AS(parse_constants(bad, {}), ParameterError);
    std::istringstream nan_value("c_b = fast\n");
    CHECK_THROWS_AS(parse_constants(nan_value, {}), ParameterError);
  }
}

TEST_SUITE("subintervals") {
  TEST_CASE("theoretical examples") {
    CHECK(subintervals_theoretical(14000, 10000, 4.0) == std::vector<Count>{10000, 4000});
    CHECK(subintervals_theoretical(10000, 10000, 4.0) == std::vector<Count>{10000, 0});
    CHECK_THROWS_AS(subintervals_theoretical(922, 50, std::log(10.0)), InfeasibleSubintervals);
  }

  TEST_CASE("theoretical mode invariants") {
    const auto c = PolicyConstants::theoretical_preset();
    for (std::size_t n : {4, 16, 100})
      for (double rho : {0.9996, 0.9999, 0.99999}) {
        const auto p = derive_params(n, rho, c);
        CHECK(std::accumulate(p.subintervals.begin(), p.subintervals.end(), Count{0}) == p.b);
        for (std::size_t u = 0; u < p.ell; ++u) CHECK(p.subintervals[u] >= (p.d + 1) / 2);
        CHECK(static_cast<double>(p.ell) <= std::sqrt(c.c_d) * std::pow(1 - rho, -2.0 / 3.0) / 38.0);
      }
  }

  TEST_CASE("adaptive examples") {
    CHECK(subintervals_adaptive(30, 10, 1.0, 2.0, 0.0) == std::vector<Count>{10, 10, 10});
    const auto I = subintervals_adaptive(922, 50, 0.9, std::log(10.0), 304);
    CHECK(std::accumulate(I.begin(), I.end(), Count{0}) == 922);
    CHECK(I.front() == 50);
    for (auto len : I) CHECK(len >= 1);
    CHECK_THROWS_AS(subintervals_adaptive(10, 10, 0.9, 1.0, 1.0), ParameterError);
  }

  TEST_CASE("adaptive lengths always sum to b") {
    for (Count d : {1, 3, 17, 200})
      for (Count extra : {1, 2, 50, 5000})
        for (double c_f : {0.0, 1.0, 6.0, 304.0}) {
          const auto I = subintervals_adaptive(d + extra, d, 0.8, 2.5, c_f);
          CHECK(std::accumulate(I.begin(), I.end(), Count{0}) == d + extra);
        }
  }
}

TEST_SUITE("backlog") {
  TEST_CASE("examples") {
    CHECK(backlog_update(5, 3, 10, 6) == 4);
    CHECK(backlog_update(0, 0, 10, 6) == 0);
    CHECK(backlog_update(2, 1, 20, 10) == 0);
    CHECK_THROWS_AS(backlog_update(1, 1, 5, 5), ParameterError);
    CHECK_THROWS_AS(backlog_update(-1, 1, 5, 4), ParameterError);
  }

  TEST_CASE("monotone and 1-Lipschitz") {
    for (Count B = 0; B < 12; ++B)
      for (Count U = 0; U < 12; ++U)
        for (Count gap = 1; gap < 12; ++gap) {
          const Count v = backlog_update(B, U, 20, 20 - gap);
          CHECK(backlog_update(B + 1, U, 20, 20 - gap) >= v);
          CHECK(backlog_update(B, U + 1, 20, 20 - gap) >= v);
          if (gap < 11) CHECK(std::abs(backlog_update(B, U, 20, 20 - gap - 1) - v) <= 1);
        }
  }
}

TEST_SUITE("max-weight") {
  TEST_CASE("examples") {
    CHECK(max_weight_schedule(QueueMatrix::diagonal({5, 3})) == Schedule::identity(2));
    CHECK(max_weight_schedule(QueueMatrix{{1, 2}, {2, 1}}) == Schedule::from_permutation({1, 0}));
    CHECK(max_weight_schedule(QueueMatrix(3)).empty());
  }

  TEST_CASE("weight matches brute force") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + trial % 5;
      std::uniform_int_distribution<Count> pick(0, 6);
      QueueMatrix q(n);
      for (auto& c : q.cells()) c = pick(rng);
      const auto s = max_weight_schedule(q);
      REQUIRE(s.is_feasible());
      Count got = 0;
      for (const auto& [i, j] : s.pairs()) {
        CHECK(q(i, j) > 0);
        got += q(i, j);
      }
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      Count best = 0;
      do {
        Count w = 0;
        for (std::size_t i = 0; i < n; ++i) w += q(i, static_cast<std::size_t>(perm[i]));
        best = std::max(best, w);
      } while (std::next_permutation(perm.begin(), perm.end()));
      CHECK(got == best);
    }
  }

  TEST_CASE("greedy matching is maximal") {
    std::vector<std::uint8_t> e{1, 1, 0, 1, 0, 0, 0, 1, 1};
    const auto s = greedy_maximal_matching(e, 3);
    CHECK(s == Schedule::from_pairs(3, {{0, 0}, {2, 1}}));
  }
}

TEST_SUITE("standard batching") {
  TEST_CASE("zero arrivals stay idle") {
    StandardBatchingPolicy pol(3, 4);
    SwitchState st(3);
    for (int t = 0; t < 20; ++t) {
      Schedule s;
      step(pol, st, ArrivalMatrix(3), &s);
      CHECK(s.empty());
    }
  }

  TEST_CASE("all-ones batch clears in two slots of the next period") {
    StandardBatchingPolicy pol(2, 3);
    SwitchState st(2);
    step(pol, st, ones(2));
    step(pol, st, ArrivalMatrix(2));
    step(pol, st, ArrivalMatrix(2));
    CHECK(st.total_queue() == 4);
    auto out = step(pol, st, ArrivalMatrix(2));
    CHECK(out.served == 2);
    out = step(pol, st, ArrivalMatrix(2));
    CHECK(out.served == 2);
    CHECK(st.total_queue() == 0);
    CHECK(st.total_wasted() == 0);
  }

  TEST_CASE("reproducible") {
    StandardBatchingPolicy a(4, 40), b(4, 40);
    const auto ta = run(a, 4, 0.7, 400, 3);
    const auto tb = run(b, 4, 0.7, 400, 3);
    std::ostringstream sa, sb;
    write_batch_csv(sa, ta);
    write_batch_csv(sb, tb);
    CHECK(sa.str() == sb.str());
    CHECK(ta.mean_total_queue == tb.mean_total_queue);
  }
}

TEST_SUITE("lower envelope") {
  TEST_CASE("zero arrivals idle throughout") {
    LowerEnvelopePolicy pol(tiny_params(3, 6, 2, 5, {2, 2, 2}));
    SwitchState st(3);
    for (int t = 0; t < 40; ++t) {
      Schedule s;
      step(pol, st, ArrivalMatrix(3), &s);
      CHECK(s.empty());
    }
    CHECK(st.total_queue() == 0);
    for (const auto& o : pol.batch_outcomes())
      if (o.backlog_known) CHECK(o.backlog_at_start == 0);
  }

  TEST_CASE("all-ones first subinterval gives one full matching") {
    // b=4, d=2, s=3: I = [2, 1, 1]; the envelope phase is slots 3 and 4.
    LowerEnvelopePolicy pol(tiny_params(2, 4, 2, 3, {2, 1, 1}));
    SwitchState st(2);
    step(pol, st, ones(2));
    step(pol, st, ArrivalMatrix(2));
    Schedule s;
    const auto out = step(pol, st, ArrivalMatrix(2), &s);
    CHECK(pol.last_phase() == LowerEnvelopePolicy::Phase::envelope);
    CHECK(pol.last_subinterval() == 1);
    CHECK(s.is_full_matching());
    CHECK(out.served == 2);
    CHECK(out.wasted == 0);
    // I_1 had no arrivals, so the next envelope slot idles.
    step(pol, st, ArrivalMatrix(2), &s);
    CHECK(s.empty());
    // Normal clearing takes the other matching.
    step(pol, st, ArrivalMatrix(2), &s);
    CHECK(pol.last_phase() == LowerEnvelopePolicy::Phase::normal_clearing);
    CHECK(st.count_if(batch_is(0)).is_zero());
  }

  TEST_CASE("rejects inconsistent subintervals") {
    CHECK_THROWS_AS(LowerEnvelopePolicy(tiny_params(2, 4, 2, 3, {1, 3})), ParameterError);
    CHECK_THROWS_AS(LowerEnvelopePolicy(tiny_params(2, 4, 2, 3, {2, 1})), ParameterError);
  }

  TEST_CASE("trace properties at desk scale") {
    const auto params = derive_params(8, 0.8, PolicyConstants::adaptive_preset());
    const Count batches = 12;
    const Count horizon = batches * params.b + params.d;
    int premise = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      LowerEnvelopePolicy pol(params);
      SwitchState st(8);
      ArrivalStream rng{{seed, 0}};
      for (Count t = 1; t <= horizon; ++t) {
        Schedule s;
        const auto out = step(pol, st, generate_arrivals(rng, 8, 0.8), &s);
        REQUIRE(s.is_feasible());
        if (pol.last_phase() == LowerEnvelopePolicy::Phase::envelope && !s.empty()) {
          CHECK(s.is_full_matching());
          CHECK(out.wasted == 0);
        }
        REQUIRE(st.conserved());
      }

      LowerEnvelopePolicy again(params);
      const auto tr = run(again, 8, 0.8, horizon, seed);
      for (const auto& b : tr.batches) {
        const auto& o = b.outcome;
        REQUIRE(o.leftover_known);
        CHECK(o.leftover <= static_cast<Count>(64) * params.b);
        const bool clean = o.envelope_phase_idle == 0 && o.envelope_phase_waste == 0;
        if (clean && std::max(b.max_row_sum, b.max_col_sum) <= params.s) {
          ++premise;
          CHECK(o.leftover == 0);
        }
      }
    }
    MESSAGE("batches meeting the clean-envelope premise: " << premise);
  }

  TEST_CASE("fixed seed batches clear at n=16, rho=0.85") {
    const auto sel = make_policy("lower-envelope", 16, 0.85, PolicyConstants::adaptive_preset());
    REQUIRE_FALSE(sel.fell_back);
    const auto& p = *sel.params;
    const auto tr = run(*sel.policy, 16, 0.85, 20 * p.b + p.d, 1, {0, false, false});
    int positive = 0;
    for (const auto& b : tr.batches) positive += b.outcome.leftover > 0;
    CHECK(positive <= 1);
  }
}

TEST_SUITE("selection") {
  TEST_CASE("names and fallback") {
    const auto c = PolicyConstants::adaptive_preset();
    CHECK(make_policy("max-weight", 8, 0.8, c).policy->name() == "max-weight");
    CHECK(make_policy("standard-batching", 8, 0.8, c).policy->batch_length() == raw_batch_length(8, 0.8, c));
    CHECK_THROWS_AS(make_policy("round-robin", 8, 0.8, c), ParameterError);
    const auto fb = make_policy("lower-envelope", 10, 0.9, PolicyConstants::theoretical_preset());
    CHECK(fb.fell_back);
    CHECK(fb.label == "lower-envelope/fallback-max-weight");
    CHECK(fb.policy->name() == "max-weight");
    CHECK_FALSE(fb.fallback_reason.empty());
  }
}
