#include <doctest.h>

#include <sstream>

#include "slabspike/csv.hpp"
#include "slabspike/dataset.hpp"
#include "slabspike/errors.hpp"
#include "support/oracles.hpp"

using namespace slabspike;

TEST_SUITE("dataset") {
  TEST_CASE("standardize maps 1,2,3 to -1,0,1") {
    Dataset raw;
    raw.y = Vector::LinSpaced(3, 1.0, 3.0);
    raw.x = Matrix(3, 1);
    raw.x << 1, 2, 3;
    raw.names = {"a"};
    const Dataset d = standardize(raw);
    CHECK(d.x(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(d.x(1, 0) == doctest::Approx(0.0));
    CHECK(d.x(2, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.standardization.x[0].mean == 2.0);
    CHECK(d.standardization.x[0].sd == doctest::Approx(1.0));
  }

  TEST_CASE("standardized columns hit exact moment targets and are idempotent") {
    const auto raw = testing::random_dataset(3, 40, 5, Vector::Ones(5) * 3.0, 2.0, 2);
    Dataset shifted = raw;
    shifted.x = (raw.x.array() * 7.0 + 11.0).matrix();
    const Dataset d = standardize(shifted);
    const auto check = [](const auto& col) {
      const auto m = column_moments(col);
      CHECK(std::abs(m.mean) < 1e-10);
      CHECK(std::abs(m.sd - 1.0) < 1e-10);
    };
    check(d.y);
    for (Index j = 0; j < d.k(); ++j) check(d.x.col(j));
    for (Index j = 0; j < d.l(); ++j) check(d.u.col(j));

    const Dataset again = standardize(d);
    CHECK((again.x - d.x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((again.y - d.y).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("constant candidate column is rejected by name") {
    Dataset raw;
    raw.y = Vector::LinSpaced(3, 1.0, 3.0);
    raw.x = Matrix(3, 2);
    raw.x << 1, 5, 2, 5, 3, 5;
    raw.names = {"ok", "flat"};
    CHECK_THROWS_WITH_AS(standardize(raw), "constant column 'flat'", DataError);
  }

  TEST_CASE("constant always-included column survives as an intercept") {
    auto raw = testing::random_dataset(5, 10, 2, Vector::Zero(2), 1.0);
    raw.u = Matrix::Ones(10, 1);
    raw.u_names = {"const"};
    const Dataset d = standardize(raw);
    CHECK(d.u.col(0).isOnes());
    CHECK(d.standardization.u[0].sd == 0.0);
  }

  TEST_CASE("shape validation") {
    auto d = testing::random_dataset(5, 3, 2, Vector::Zero(2), 1.0, 3);
    CHECK_THROWS_AS(validate(d), DataError);  // l >= n
    auto tiny = testing::random_dataset(5, 1, 1, Vector::Zero(1), 1.0);
    CHECK_THROWS_AS(validate(tiny), DataError);
  }
}

TEST_SUITE("csv") {
  TEST_CASE("response, always-included and candidate columns") {
    std::istringstream in("y,a,b,c\n1,2,3,4\n2,1,0,4\n3,5,5,4.5\n");
    const auto t = read_csv(in);
    const auto d = dataset_from_table(t, "y", {"c"});
    CHECK(d.k() == 2);
    CHECK(d.l() == 1);
    CHECK(d.names == std::vector<std::string>{"a", "b"});
    CHECK(d.x(2, 1) == 5.0);
    CHECK(d.u(2, 0) == 4.5);
    CHECK(d.y[1] == 2.0);
  }

  TEST_CASE("missing response column names the column") {
    std::istringstream in("y,a\n1,2\n2,3\n");
    const auto t = read_csv(in);
    CHECK_THROWS_WITH_AS(dataset_from_table(t, "target"), "response column 'target' not found in header", DataError);
  }

  TEST_CASE("malformed rows report their line") {
    std::istringstream short_row("y,a\n1,2\n3\n");
    try {
      read_csv(short_row);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(e.line() == 3);
    }
    std::istringstream missing("y,a\n1,\n");
    CHECK_THROWS_AS(read_csv(missing), DataError);
    std::istringstream na("y,a\n1,NA\n");
    CHECK_THROWS_AS(read_csv(na), DataError);
    std::istringstream text("y,a\n1,abc\n");
    CHECK_THROWS_WITH_AS(read_csv(text), "line 2: non-numeric value 'abc' in column 'a'", DataError);
  }

  TEST_CASE("17 significant digits round-trip doubles") {
    const double v = 0.1 + 0.2;
    CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(0.5) == "0.5");
  }
}
