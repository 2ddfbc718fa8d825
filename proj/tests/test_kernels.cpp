#include "doctest.h"
#include "wpt/em_model.hpp"
#include "wpt/kernels.hpp"

using namespace wpt;

TEST_SUITE("kernels") {
  TEST_CASE("parallel Neumann sum is bit identical to the serial sum") {
    const CoilSpec c;
    for (int pieces : {1, 4, 16}) {
      const auto a = kernels::subdivide(coil_filaments(c, {0, 0, 0}), pieces);
      const auto b = kernels::subdivide(coil_filaments(c, {7, -3, 5}), pieces);
      CHECK(kernels::neumann_sum_parallel(a, b) == kernels::neumann_sum_serial(a, b));
    }
  }

  TEST_CASE("subdivision preserves geometry") {
    const std::vector<kernels::Filament> f{{{0, 0, 0}, {1, 0, 0}}};
    const auto s = kernels::subdivide(f, 4);
    REQUIRE(s.size() == 4);
    CHECK(s[0].a[0] == 0.0);
    CHECK(s[3].b[0] == 1.0);
    CHECK(s[1].a[0] == doctest::Approx(0.25));
  }

  TEST_CASE("parallel-filament kernel is exact under subdivision") {
    const kernels::Filament a{{0, 0, 0}, {0.02, 0, 0}}, b{{0.004, 0.01, 0.003}, {0.03, 0.01, 0.003}};
    const double whole = kernels::filament_pair_mutual(a, b);
    const auto sa = kernels::subdivide(std::vector{a}, 7);
    const auto sb = kernels::subdivide(std::vector{b}, 5);
    CHECK(kernels::neumann_sum_serial(sa, sb) == doctest::Approx(whole).epsilon(1e-12));
  }

  TEST_CASE("oblique filaments are rejected") {
    const kernels::Filament a{{0, 0, 0}, {1, 0, 0}}, b{{0, 1, 0}, {1, 2, 0}};
    CHECK_THROWS_AS(kernels::filament_pair_mutual(a, b), DomainError);
  }
}
