#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coevgan/audit.hpp"
#include "coevgan/errors.hpp"
#include "coevgan/runtime.hpp"

using namespace coevgan;

namespace {

Counters run_counters(Method m, int dim, int epochs, std::size_t batches) {
  ToyBackendConfig c;
  c.batches_per_epoch = batches;
  ToyBackend b(c);
  GridRunConfig g;
  g.method = m;
  g.train.method = m;
  g.grid_dim = dim;
  g.train.epochs = epochs;
  return run_grid(b, g).counters;
}

std::uint64_t expected(const AuditReport& r, const std::string& counter) {
  for (const auto& row : r.rows)
    if (row.counter == counter) return row.expected;
  FAIL("missing counter " << counter);
  return 0;
}

}  // namespace

TEST_CASE("effective subpopulation") {
  CHECK(effective_subpopulation(1) == 1);
  CHECK(effective_subpopulation(2) == 5);
  CHECK(effective_subpopulation(3) == 5);
  CHECK(effective_subpopulation(8) == 5);
}

TEST_CASE("closed forms") {
  const Counters none;
  SUBCASE("lipizzaner 3x3, T=2") {
    const auto r = audit_interactions(none, Method::Lipizzaner, GridConfig{3}, 2, 4);
    CHECK(expected(r, "pairwise_evaluations") == 900);
    CHECK(expected(r, "gradient_updates") == 2 * 5 * 4 * 9 * 2);
    CHECK(expected(r, "migrations") == 4 * 9 * 2);
    CHECK(expected(r, "selections") == 2 * 5 * 9 * 2);
    CHECK(r.panmictic_pairwise == 2 * 81 * 2);
    CHECK_FALSE(r.passed());
  }
  SUBCASE("pagan") {
    const auto r = audit_interactions(none, Method::PaGAN, GridConfig{3}, 2, 4);
    CHECK(expected(r, "pairwise_evaluations") == 0);
    CHECK(expected(r, "migrations") == 0);
    CHECK(expected(r, "gradient_updates") == 2 * 4 * 9 * 2);
  }
  SUBCASE("spagan never selects") {
    const auto r = audit_interactions(none, Method::SPaGAN, GridConfig{3}, 2, 4);
    CHECK(expected(r, "selections") == 0);
    CHECK(expected(r, "migrations") == 72);
  }
  SUBCASE("isocogan migrates once") {
    const auto r = audit_interactions(none, Method::IsoCoGAN, GridConfig{3}, 7, 4);
    CHECK(expected(r, "migrations") == 36);
  }
}

TEST_CASE("recorded counters match the closed forms") {
  for (Method m : {Method::Lipizzaner, Method::SPaGAN, Method::IsoCoGAN, Method::PaGAN})
    for (int dim : {1, 2, 3, 4}) {
      CAPTURE(to_string(m));
      CAPTURE(dim);
      const auto c = run_counters(m, dim, 3, 2);
      const auto r = audit_interactions(c, m, GridConfig{dim}, 3, 2);
      CHECK(r.passed());
      CHECK_NOTHROW(require_passed(r));
    }
}

TEST_CASE("mismatches are reported with both values") {
  auto c = run_counters(Method::Lipizzaner, 3, 2, 2);
  c.migrations += 1;
  const auto r = audit_interactions(c, Method::Lipizzaner, GridConfig{3}, 2, 2);
  CHECK_FALSE(r.passed());
  try {
    require_passed(r);
    FAIL("expected AuditFailure");
  } catch (const AuditFailure& e) {
    const std::string msg = e.what();
    CHECK(msg.find("migrations") != std::string::npos);
    CHECK(msg.find("72") != std::string::npos);
    CHECK(msg.find("73") != std::string::npos);
  }
}
