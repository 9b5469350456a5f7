#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "qcoh/state.hpp"
#include "qcoh/state_zoo.hpp"

using namespace qcoh;
using qcoh::testing::bell_phi_plus;
using qcoh::testing::entries_close;
using qcoh::testing::single_qubit;
using qcoh::testing::small_dims_pool;
using qcoh::testing::zero_times_bell;
using Catch::Matchers::WithinAbs;

namespace {

Error catch_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("make_pure builds projectors") {
  SECTION("GHZ has four entries of one half") {
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Complex> amps(8, 0.0);
    amps[0] = amps[7] = s;
    const State st = make_pure(amps, three_qubits());
    int nonzero = 0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        if (std::abs(st.entry(i, j)) > 0) {
          ++nonzero;
          CHECK_THAT(st.entry(i, j).real(), WithinAbs(0.5, 1e-15));
        }
    CHECK(nonzero == 4);
    CHECK(st.purity() == Purity::pure);
    CHECK_THAT(std::abs(st.matrix().trace() - 1.0), WithinAbs(0.0, 1e-15));
  }

  SECTION("basis state becomes diag(1,0)") {
    const std::vector<Complex> amps{1.0, 0.0};
    const State st = make_pure(amps, Dims({2}));
    CHECK(st.entry(0, 0) == Complex(1.0));
    CHECK(st.entry(1, 1) == Complex(0.0));
    CHECK(st.entry(0, 1) == Complex(0.0));
  }

  SECTION("W projector has nine entries of one third") {
    const State st = w_state();
    const std::vector<int> support{4, 2, 1};
    for (int i : support)
      for (int j : support)
        CHECK_THAT(st.entry(i, j).real(), WithinAbs(1.0 / 3.0, 1e-15));
    double total = 0.0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) total += std::abs(st.entry(i, j));
    CHECK_THAT(total, WithinAbs(3.0, 1e-12));
  }

  SECTION("length and norm are enforced") {
    const std::vector<Complex> short_vec{1.0, 0.0};
    CHECK(catch_kind([&] { make_pure(short_vec, three_qubits()); }).kind() ==
          ErrorKind::length_mismatch);
    const std::vector<Complex> unnormalized{0.9, 0.0};
    CHECK(catch_kind([&] { make_pure(unnormalized, Dims({2})); }).kind() ==
          ErrorKind::not_normalized);
  }
}

TEST_CASE("kron") {
  SECTION("basis products") {
    const State a = make_pure(std::vector<Complex>{1.0, 0.0}, Dims({2}));
    const State b = make_pure(std::vector<Complex>{0.0, 1.0}, Dims({2}));
    const State ab = kron(a, b);
    for (int i = 0; i < 4; ++i)
      CHECK_THAT(ab.entry(i, i).real(), WithinAbs(i == 1 ? 1.0 : 0.0, 1e-15));
    CHECK(ab.dims() == Dims({2, 2}));
  }

  SECTION("two-qubit block structure") {
    const State r1 = single_qubit(0.3, Complex(0.1, 0.2));
    const State r2 = single_qubit(0.6, Complex(-0.05, 0.15));
    const State prod = kron(r1, r2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            CHECK_THAT(std::abs(prod.entry(i * 2 + k, j * 2 + l) -
                                r1.entry(i, j) * r2.entry(k, l)),
                       WithinAbs(0.0, 1e-15));
  }

  SECTION("|0><0| x bell") {
    const State a = make_pure(std::vector<Complex>{1.0, 0.0}, Dims({2}));
    const State prod = kron(a, bell_phi_plus());
    CHECK(entries_close(prod, zero_times_bell(), 1e-15));
  }
}

TEST_CASE("partial_trace") {
  SECTION("W reduces to diag(2/3, 1/3)") {
    const State r = partial_trace(w_state(), {0});
    CHECK_THAT(r.entry(0, 0).real(), WithinAbs(2.0 / 3.0, 1e-14));
    CHECK_THAT(r.entry(1, 1).real(), WithinAbs(1.0 / 3.0, 1e-14));
    CHECK_THAT(std::abs(r.entry(0, 1)), WithinAbs(0.0, 1e-15));
  }

  SECTION("GHZ(theta, delta) reduces to a diagonal two-qubit state") {
    const double theta = 0.7, delta = 1.3;
    const State r = partial_trace(ghz_state(theta, delta), {1, 2});
    const double c2 = std::cos(theta) * std::cos(theta);
    CHECK_THAT(r.entry(0, 0).real(), WithinAbs(c2, 1e-14));
    CHECK_THAT(r.entry(3, 3).real(), WithinAbs(1.0 - c2, 1e-14));
    CHECK_THAT(std::abs(r.entry(1, 1)), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(r.entry(0, 3)), WithinAbs(0.0, 1e-15));
  }

  SECTION("tracing out an uncorrelated factor") {
    Rng rng(7);
    const State a = random_mixed_state(Dims({2}), rng);
    const State b = random_mixed_state(Dims({2}), rng);
    const State r = partial_trace(kron(a, b), {0});
    CHECK(entries_close(r, a, 1e-14));
  }

  SECTION("keep-set errors") {
    const State w = w_state();
    const std::vector<int> empty;
    CHECK(catch_kind([&] {
            partial_trace(w, std::span<const int>(empty.data(), 0));
          }).kind() == ErrorKind::empty_keep_set);
    CHECK(catch_kind([&] { partial_trace(w, {5}); }).kind() ==
          ErrorKind::index_out_of_range);
    CHECK(catch_kind([&] { partial_trace(w, {0, 1, 2}); }).kind() ==
          ErrorKind::index_out_of_range);
  }
}

TEST_CASE("mix") {
  SECTION("two basis states") {
    const State a = make_pure(std::vector<Complex>{1.0, 0.0}, Dims({2}));
    const State b = make_pure(std::vector<Complex>{0.0, 1.0}, Dims({2}));
    const State m = mix({{0.5, a}, {0.5, b}});
    CHECK_THAT(m.entry(0, 0).real(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(m.entry(1, 1).real(), WithinAbs(0.5, 1e-15));
    CHECK(m.purity() == Purity::mixed);
  }

  SECTION("GHZ/W half-half mixture") {
    const State ghz = ghz_state(std::numbers::pi / 4.0, 0.0);
    const State m = mix({{0.5, ghz}, {0.5, w_state()}});
    CHECK(m.side() == 8);
    CHECK_THAT(m.entry(0, 7).real(), WithinAbs(0.25, 1e-14));
    CHECK_THAT(m.entry(1, 2).real(), WithinAbs(1.0 / 6.0, 1e-14));
    CHECK_THAT(std::abs(m.matrix().trace() - 1.0), WithinAbs(0.0, 1e-14));
  }

  SECTION("weight validation") {
    const State a = make_pure(std::vector<Complex>{1.0, 0.0}, Dims({2}));
    CHECK(catch_kind([&] { mix({{0.3, a}, {0.8, a}}); }).kind() ==
          ErrorKind::weight_sum_invalid);
    const State b = make_pure(std::vector<Complex>{1.0, 0.0, 0.0}, Dims({3}));
    CHECK(catch_kind([&] { mix({{0.5, a}, {0.5, b}}); }).kind() ==
          ErrorKind::dims_mismatch);
  }
}

TEST_CASE("validate") {
  SECTION("W projector passes") {
    const ValidationReport r = validate(w_state());
    CHECK(r.ok());
    CHECK_THAT(r.min_eigenvalue, WithinAbs(0.0, 1e-12));
  }

  SECTION("trace deviation is reported") {
    Matrix m(2);
    m(0, 0) = 0.9;
    const State st(std::move(m), Dims({2}), Purity::unknown, Validation::none);
    const ValidationReport r = validate(st);
    CHECK_THAT(r.trace_dev, WithinAbs(0.1, 1e-15));
    CHECK_FALSE(r.unit_trace);
  }

  SECTION("small non-hermitian perturbations fail a tight tolerance") {
    Matrix m(2);
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    m(0, 1) = Complex(0.0, 1e-3);
    m(1, 0) = Complex(0.0, 1e-3);  // conj would be -1e-3 i
    const State st(std::move(m), Dims({2}), Purity::unknown, Validation::none);
    const ValidationReport r = validate(st);
    CHECK_FALSE(r.hermitian);
    CHECK_THAT(r.hermiticity_dev, WithinAbs(2e-3, 1e-12));
  }

  SECTION("construction-time validation can reject") {
    Matrix m(2);
    m(0, 0) = 0.9;
    CHECK(catch_kind([&] { State(std::move(m), Dims({2})); }).kind() ==
          ErrorKind::invalid_state);
  }
}

TEST_CASE("tensor-core properties on random states") {
  Rng rng(2024);
  const auto& pool = small_dims_pool();
  for (int trial = 0; trial < 500; ++trial) {
    const Dims& da = pool[static_cast<size_t>(rng.below(static_cast<int>(pool.size())))];
    const Dims& db = pool[static_cast<size_t>(rng.below(static_cast<int>(pool.size())))];
    const State a = random_state(da, rng, rng.uniform() < 0.5);
    const State b = random_state(db, rng, rng.uniform() < 0.5);
    const State ab = kron(a, b);

    // trace multiplicativity
    const Complex ta = a.matrix().trace(), tb = b.matrix().trace();
    REQUIRE_THAT(std::abs(ab.matrix().trace() - ta * tb), WithinAbs(0.0, 1e-12));

    // reduction to the left factor
    std::vector<int> keep_a;
    for (int k = 0; k < da.count(); ++k) keep_a.push_back(k);
    const State back = partial_trace(ab, std::span<const int>(keep_a.data(), keep_a.size()));
    REQUIRE(back.matrix().max_abs_diff(a.matrix()) <= 1e-12);

    // trace preservation under reduction
    REQUIRE_THAT(std::abs(back.matrix().trace() - 1.0), WithinAbs(0.0, 1e-12));

    // hermiticity preservation
    REQUIRE(ab.matrix().hermiticity_deviation() <= 1e-13);
    REQUIRE(back.matrix().hermiticity_deviation() <= 1e-13);

    const State blended = mix({{0.4, a}, {0.6, random_state(da, rng, true)}});
    REQUIRE(blended.matrix().hermiticity_deviation() <= 1e-13);
  }
}

TEST_CASE("product_at embeds a solo factor at any position") {
  Rng rng(99);
  const State solo = random_mixed_state(Dims({2}), rng);
  const State rest = random_state(Dims({2, 2}), rng, true);

  SECTION("position zero matches kron") {
    CHECK(entries_close(product_at(solo, rest, 0), kron(solo, rest), 1e-14));
  }

  SECTION("reductions recover both factors") {
    for (int pos = 0; pos < 3; ++pos) {
      const State full = product_at(solo, rest, pos);
      CHECK(entries_close(partial_trace(full, {pos}), solo, 1e-13));
      std::vector<int> others;
      for (int k = 0; k < 3; ++k)
        if (k != pos) others.push_back(k);
      const State r = partial_trace(full, std::span<const int>(others.data(), 2));
      CHECK(entries_close(r, rest, 1e-13));
    }
  }
}
