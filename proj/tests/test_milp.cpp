#include <catch2/catch_amalgamated.hpp>

#include "drcbm/highs_backend.hpp"
#include "drcbm/model.hpp"

TEST_CASE("wiring smoke") {
  drcbm::milp::Model m;
  int a = m.add_var(0, 10, drcbm::milp::VarType::Integer, "a");
  int b = m.add_var(0, 10, drcbm::milp::VarType::Integer, "b");
  m.set_obj(a, 1.0);
  m.set_obj(b, 2.0);
  m.add_row(3.0, drcbm::milp::kInf, {{a, 1.0}, {b, 1.0}});
  drcbm::milp::HighsSolver solver;
  auto res = solver.solve(m, {});
  REQUIRE(res.status == drcbm::milp::Status::Optimal);
  REQUIRE(res.objective == Catch::Approx(3.0));
}
