#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ionpulse/fock.hpp"

using namespace ionpulse;

TEST_CASE("ladder operator entries") {
    const SpaceConfig cfg{3, 0};
    const Operators ops = build_operators(cfg);
    int nonzeros = 0;
    for (int r = 0; r < cfg.dim(); ++r)
        for (int c = 0; c < cfg.dim(); ++c)
            if (std::abs(ops.a(r, c)) > 0.0) ++nonzeros;
    CHECK(nonzeros == 4);
    CHECK(ops.a(flat_index(Electronic::g, 0, cfg), flat_index(Electronic::g, 1, cfg)) ==
          Complex(1.0));
    CHECK(ops.a(flat_index(Electronic::e, 1, cfg), flat_index(Electronic::e, 2, cfg)) ==
          Complex(std::sqrt(2.0)));
}

TEST_CASE("Pauli algebra on the electronic factor") {
    const SpaceConfig cfg{2, 0};
    const Operators ops = build_operators(cfg);
    const Matrix anti = ops.sigma_plus * ops.sigma_minus + ops.sigma_minus * ops.sigma_plus;
    CHECK((anti - ops.identity).cwiseAbs().maxCoeff() == 0.0);
    const Matrix sz = ops.sigma_plus * ops.sigma_minus - ops.sigma_minus * ops.sigma_plus;
    CHECK((sz - ops.sigma_z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncated commutator [a, a_dag]") {
    const SpaceConfig cfg{8, 0};
    const Operators ops = build_operators(cfg);
    const Matrix comm = ops.a * ops.a_dag - ops.a_dag * ops.a;
    for (int k = 0; k < 7; ++k)
        for (Electronic s : {Electronic::g, Electronic::e})
            CHECK(std::abs(comm(flat_index(s, k, cfg), flat_index(s, k, cfg)) - Complex(1.0)) <
                  1e-14);
    CHECK(std::abs(comm(flat_index(Electronic::g, 7, cfg), flat_index(Electronic::g, 7, cfg)) -
                   Complex(1.0 - 8.0)) < 1e-14);
    // off-diagonal entries all vanish
    Matrix off = comm;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flat index convention and round trip") {
    const SpaceConfig cfg{5, 0};
    CHECK(flat_index(Electronic::g, 0, cfg) == 0);
    CHECK(flat_index(Electronic::e, 0, cfg) == 1);
    CHECK(flat_index(Electronic::g, 1, cfg) == 2);
    for (int d : {2, 5, 9}) {
        const SpaceConfig c{d, 0};
        std::vector<bool> seen(static_cast<std::size_t>(c.dim()), false);
        for (int k = 0; k < d; ++k)
            for (Electronic s : {Electronic::g, Electronic::e}) {
                const int idx = flat_index(s, k, c);
                REQUIRE(idx >= 0);
                REQUIRE(idx < c.dim());
                CHECK(!seen[static_cast<std::size_t>(idx)]);
                seen[static_cast<std::size_t>(idx)] = true;
                const BasisIndex back = basis_from_flat(idx, c);
                CHECK(back.electronic == s);
                CHECK(back.k == k);
            }
    }
    CHECK_THROWS_AS(flat_index(Electronic::g, 5, cfg), std::out_of_range);
}

TEST_CASE("adjoint and sparsity are exact") {
    const SpaceConfig cfg{6, 0};
    const Operators ops = build_operators(cfg);
    CHECK((ops.a_dag - ops.a.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    // sigma_z strictly diagonal, sigma_plus strictly on the e<-g offsets
    for (int r = 0; r < cfg.dim(); ++r)
        for (int c = 0; c < cfg.dim(); ++c) {
            if (r != c) CHECK(ops.sigma_z(r, c) == Complex(0.0));
            const bool allowed = r % 2 == 1 && c == r - 1;
            if (!allowed) CHECK(ops.sigma_plus(r, c) == Complex(0.0));
        }
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(build_operators(SpaceConfig{1, 0}), ConfigError);
    CHECK_THROWS_AS(build_operators(SpaceConfig{4, 4}), ConfigError);
    CHECK_NOTHROW(build_operators(SpaceConfig{4, 3}));
}

TEST_CASE("basis labels") {
    CHECK(basis_label(BasisIndex{Electronic::g, 1}) == "g1");
    const BasisIndex b = parse_basis_label("e12");
    CHECK(b.electronic == Electronic::e);
    CHECK(b.k == 12);
    CHECK_THROWS_AS(parse_basis_label("x1"), UsageError);
}
