#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "switchsim/policies.hpp"
#include "switchsim/simulator.hpp"

using namespace switchsim;

TEST_SUITE("arrivals") {
  TEST_CASE("parameter range") {
    ArrivalStream rng{{1, 0}};
    CHECK_THROWS_AS(generate_arrivals(rng, 4, 0.0), ParameterError);
    CHECK_THROWS_AS(generate_arrivals(rng, 4, 1.0), ParameterError);
    CHECK_THROWS_AS(generate_arrivals(rng, 0, 0.5), ParameterError);
  }

  TEST_CASE("tiny load gives empty slots") {
    ArrivalStream rng{{42, 0}};
    Count total = 0;
    for (int t = 0; t < 1000; ++t) total += generate_arrivals(rng, 4, 1e-9).total();
    CHECK(total == 0);
  }

  TEST_CASE("fixed seed is reproducible and advances") {
    ArrivalStream a{{99, 3}}, b{{99, 3}};
    for (int t = 0; t < 50; ++t) CHECK(generate_arrivals(a, 4, 0.8) == generate_arrivals(b, 4, 0.8));
    CHECK(a.next_slot == 51);
    CHECK(arrivals_at({99, 3}, 7, 4, 0.8) == arrivals_at({99, 3}, 7, 4, 0.8));
    ArrivalStream c{{99, 3}};
    for (int t = 1; t < 7; ++t) generate_arrivals(c, 4, 0.8);
    CHECK(generate_arrivals(c, 4, 0.8) == arrivals_at({99, 3}, 7, 4, 0.8));
  }

  TEST_CASE("streams differ across seeds and replications") {
    int same_seed = 0, same_rep = 0;
    for (std::uint64_t t = 1; t <= 100; ++t) {
      same_seed += arrivals_at({1, 0}, t, 8, 0.9) == arrivals_at({2, 0}, t, 8, 0.9);
      same_rep += arrivals_at({1, 0}, t, 8, 0.9) == arrivals_at({1, 1}, t, 8, 0.9);
    }
    CHECK(same_seed < 10);
    CHECK(same_rep < 10);
  }

  TEST_CASE("per-cell mean within three standard errors") {
    const std::size_t n = 10;
    const double rho = 0.9;
    const int slots = 100000;
    ArrivalStream rng{{2024, 0}};
    std::vector<Count> hits(n * n, 0);
    for (int t = 0; t < slots; ++t) {
      const auto a = generate_arrivals(rng, n, rho);
      for (std::size_t c = 0; c < n * n; ++c) hits[c] += a.bits()[c];
    }
    const double p = rho / static_cast<double>(n);
    const double se_cell = std::sqrt(p * (1 - p) / slots);
    int outside = 0;
    Count all = 0;
    for (auto h : hits) {
      outside += std::abs(static_cast<double>(h) / slots - p) > 3 * se_cell;
      all += h;
    }
    // Expected about 0.27 cells out of 100 beyond 3 SE.
    CHECK(outside <= 3);
    const double pooled = static_cast<double>(all) / (static_cast<double>(slots) * n * n);
    CHECK(std::abs(pooled - p) <= 3 * std::sqrt(p * (1 - p) / (static_cast<double>(slots) * n * n)));
  }
}

TEST_SUITE("switch state") {
  TEST_CASE("empty schedule leaves state unchanged") {
    SwitchState st(3);
    ArrivalMatrix a(3);
    a.set(0, 1);
    st.inject_arrivals(a, {});
    const auto before = st.queue_matrix();
    const auto out = st.apply_schedule(Schedule(3), any_packet());
    CHECK(out.offered == 0);
    CHECK(st.queue_matrix() == before);
    CHECK(st.total_wasted() == 0);
  }

  TEST_CASE("identity on identity queues") {
    SwitchState st(3);
    ArrivalMatrix a(3);
    for (std::size_t i = 0; i < 3; ++i) a.set(i, i);
    st.inject_arrivals(a, {});
    const auto out = st.apply_schedule(Schedule::identity(3), any_packet());
    CHECK(out.served == 3);
    CHECK(out.wasted == 0);
    CHECK(st.total_queue() == 0);
  }

  TEST_CASE("identity on empty state wastes n") {
    SwitchState st(4);
    const auto out = st.apply_schedule(Schedule::identity(4), any_packet());
    CHECK(out.wasted == 4);
    CHECK(st.total_wasted() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(st.wasted(i, i) == st.offered(i, i) - st.services(i, i));
  }

  TEST_CASE("infeasible schedule rejected") {
    SwitchState st(2);
    Schedule s(2);
    s.set(0, 0);
    s.set(0, 1);
    CHECK_THROWS_AS(st.apply_schedule(s, any_packet()), InfeasibleSchedule);
  }

  TEST_CASE("injection") {
    SwitchState st(2);
    st.inject_arrivals(ArrivalMatrix(2), {});
    CHECK(st.total_queue() == 0);
    ArrivalMatrix ones(2);
    for (auto& b : ones.bits()) b = 1;
    st.inject_arrivals(ones, {});
    CHECK(st.total_queue() == 4);
  }

  TEST_CASE("queues equal cumulative arrivals without service") {
    SwitchState st(3);
    ArrivalStream rng{{5, 0}};
    for (int t = 0; t < 200; ++t) {
      st.inject_arrivals(generate_arrivals(rng, 3, 0.7), {});
      st.advance();
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) REQUIRE(st.queue(i, j) == st.arrivals(i, j));
    }
    CHECK(st.conserved());
  }

  TEST_CASE("filters pick the oldest matching packet") {
    SwitchState st(2);
    ArrivalMatrix a(2);
    a.set(0, 0);
    st.inject_arrivals(a, {0, 0, 0});
    st.advance();
    st.inject_arrivals(a, {1, 2, 0});
    st.advance();
    CHECK(st.count_if(batch_is(1))(0, 0) == 1);
    CHECK(st.total_if(batch_below(1)) == 1);
    CHECK(st.total_if(batch_at_most(1)) == 2);
    auto out = st.apply_schedule(Schedule::identity(2), from_subinterval(1, 2));
    CHECK(out.served == 1);
    CHECK(out.wasted == 1);
    REQUIRE(st.fifo(0, 0).size() == 1);
    CHECK(st.fifo(0, 0).front().batch == 0);
    CHECK(st.fifo(0, 0).front().arrival_slot == 1);
  }
}

TEST_SUITE("run") {
  TEST_CASE("idle policy accumulates every arrival") {
    IdlePolicy idle(4);
    RunOptions opt;
    opt.check_conservation = true;
    const auto tr = run(idle, 4, 0.6, 500, 17, opt);
    CHECK(tr.total_services == 0);
    CHECK(tr.slots.back().total_queue == tr.total_arrivals);
    // mean n * t * rho = 1200, sd about 34
    CHECK(std::abs(static_cast<double>(tr.total_arrivals) - 1200.0) < 6 * 34.0);
  }

  TEST_CASE("identical inputs give identical traces") {
    MaxWeightPolicy a(50), b(50);
    const auto ta = run(a, 4, 0.8, 2000, 31);
    const auto tb = run(b, 4, 0.8, 2000, 31);
    std::ostringstream sa, sb;
    write_slot_csv(sa, ta);
    write_slot_csv(sb, tb);
    CHECK(sa.str() == sb.str());
    std::ostringstream ba, bb;
    write_batch_csv(ba, ta);
    write_batch_csv(bb, tb);
    CHECK(ba.str() == bb.str());
  }

  TEST_CASE("max-weight is stable at half load") {
    MaxWeightPolicy mw(1000);
    RunOptions opt;
    opt.check_conservation = true;
    opt.record_slots = false;
    const auto tr = run(mw, 4, 0.5, 100000, 8, opt);
    CHECK(tr.mean_total_queue < 20.0);
    CHECK(tr.max_total_queue < 100);
  }

  TEST_CASE("batch metrics count arrivals per line") {
    IdlePolicy idle(3, 10);
    const auto tr = run(idle, 3, 0.5, 30, 4);
    REQUIRE(tr.batches.size() == 3);
    Count sum = 0;
    for (const auto& b : tr.batches) {
      Count rows = 0, cols = 0;
      for (auto r : b.row_arrivals) rows += r;
      for (auto c : b.col_arrivals) cols += c;
      CHECK(rows == cols);
      sum += rows;
    }
    CHECK(sum == tr.total_arrivals);
  }

  TEST_CASE("csv headers") {
    IdlePolicy idle(2, 2);
    const auto tr = run(idle, 2, 0.5, 4, 1);
    std::ostringstream s, b;
    write_slot_csv(s, tr);
    write_batch_csv(b, tr);
    CHECK(s.str().rfind("slot,total_queue,wasted,idle\n", 0) == 0);
    CHECK(b.str().rfind("batch,U_k,B_k,max_row_sum,max_col_sum\n", 0) == 0);
  }
}
