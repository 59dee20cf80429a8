#include "nilbal/intmat.hpp"

#include <doctest.h>
#include <random>

using namespace nilbal;

namespace {

// independent check of a Smith decomposition
void check_snf(const IntMat& a, const SnfResult& s) {
    REQUIRE(s.U.rows() == a.rows());
    REQUIRE(s.V.cols() == a.cols());
    IntMat prod = s.U * a * s.V;
    CHECK(prod == s.D);
    Int du = det(s.U), dv = det(s.V);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    int n = std::min(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) CHECK(s.D(i, j) == 0);
    for (int i = 0; i + 1 < n; ++i) {
        CHECK(s.D(i, i) >= 0);
        if (s.D(i, i) != 0) {
            if (s.D(i + 1, i + 1) != 0) CHECK(s.D(i + 1, i + 1) % s.D(i, i) == 0);
        } else {
            CHECK(s.D(i + 1, i + 1) == 0);
        }
    }
}

IntMat from_rows(std::vector<std::vector<long long>> rows) {
    IntMat m(int(rows.size()), rows.empty() ? 0 : int(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(int(i), int(j)) = rows[i][j];
    return m;
}

} // namespace

TEST_CASE("snf fixes a diagonal that violates the chain") {
    IntMat m = from_rows({{2, 0}, {0, 3}});
    SnfResult s = smith_normal_form(m);
    check_snf(m, s);
    CHECK(s.D(0, 0) == 1);
    CHECK(s.D(1, 1) == 6);
}

TEST_CASE("snf of the zero matrix") {
    IntMat m(3, 2);
    SnfResult s = smith_normal_form(m);
    CHECK(s.D.is_zero());
    CHECK(s.U == IntMat::identity(3));
    CHECK(s.V == IntMat::identity(2));
}

TEST_CASE("snf on random matrices") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 60; ++trial) {
        int r = 1 + int(rng() % 8), c = 1 + int(rng() % 8);
        IntMat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                m(i, j) = (long long)(rng() % 20001) - 10000;
        SnfResult s = smith_normal_form(m);
        check_snf(m, s);
        CHECK(s.rank == rank_z(m));
    }
}

TEST_CASE("kernel lattice and integer solving") {
    IntMat m = from_rows({{2, 4, 6}, {1, 2, 3}});
    IntMat k = kernel_lattice(m);
    CHECK(k.cols() == 2);
    for (int j = 0; j < k.cols(); ++j) {
        for (int i = 0; i < m.rows(); ++i) {
            Int s = 0;
            for (int c = 0; c < 3; ++c) s += m(i, c) * k(c, j);
            CHECK(s == 0);
        }
    }
    auto x = solve_z(m, {4, 2});
    REQUIRE(x.has_value());
    CHECK(2 * (*x)[0] + 4 * (*x)[1] + 6 * (*x)[2] == 4);
    CHECK(!solve_z(m, {1, 1}).has_value());
}

TEST_CASE("lattice membership, preimage, canonical form") {
    IntMat l = from_rows({{2, 0}, {0, 3}});
    CHECK(lattice_member(l, {4, 3}));
    CHECK(!lattice_member(l, {1, 0}));
    IntMat a = from_rows({{1, 0}, {0, 2}});
    // {x : a x in l} = 2Z x 3Z ... second coord: 2x2 in 3Z -> x2 in 3Z (gcd(2,3)=1)
    IntMat pre = lattice_preimage(a, l);
    CHECK(lattice_equal(pre, from_rows({{2, 0}, {0, 3}})));
    CHECK(lattice_equal(lattice_canonical(from_rows({{2, 4}, {0, 0}})),
                        from_rows({{2}, {0}})));
}

TEST_CASE("sparse snf agrees with the dense one") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        int r = 2 + int(rng() % 10), c = 2 + int(rng() % 14);
        SparseIntMat sp;
        sp.rows = r;
        sp.cols = c;
        sp.col_entries.resize(c);
        IntMat dense(r, c);
        for (int j = 0; j < c; ++j)
            for (int t = 0; t < 3; ++t) {
                int i = int(rng() % r);
                long long v = (long long)(rng() % 7) - 3;
                if (!v) continue;
                sp.add(i, j, v);
                dense(i, j) += v;
            }
        auto got = sparse_snf(sp);
        auto diag = snf_diagonal(dense);
        std::vector<Int> expect;
        int rank = 0;
        for (auto& d : diag)
            if (d != 0) {
                ++rank;
                if (d > 1) expect.push_back(d);
            }
        CHECK(got.rank == rank);
        CHECK(got.nontrivial_factors == expect);
    }
}
