#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "kernelpa/error.hpp"
#include "kernelpa/regressor.hpp"

using namespace kernelpa;

namespace {

double max_offdiag(const OrthogonalBasis& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < b.columns.size(); ++i) {
        if (b.table.degenerate[i]) continue;
        for (std::size_t j = i + 1; j < b.columns.size(); ++j) {
            if (b.table.degenerate[j]) continue;
            const double v = std::abs(inner_product(b.columns[i], b.columns[j])) /
                             (euclidean_norm(b.columns[i]) * euclidean_norm(b.columns[j]));
            worst = std::max(worst, v);
        }
    }
    return worst;
}

double max_column_rel_error(const RegressorMatrix& a, const RegressorMatrix& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.n_columns(); ++k) {
        double diff = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < a.n_rows; ++i) {
            diff += std::norm(a.columns[k][i] - b.columns[k][i]);
            ref += std::norm(a.columns[k][i]);
        }
        worst = std::max(worst, std::sqrt(diff / ref));
    }
    return worst;
}

RegressorMatrix random_matrix(testgen::Gen& g, std::size_t rows, std::size_t cols) {
    RegressorMatrix r;
    r.n_rows = rows;
    for (std::size_t k = 0; k < cols; ++k) {
        r.descriptors.push_back({{static_cast<int>(k)}, static_cast<int>(k)});
        r.columns.push_back(g.white(rows));
    }
    r.memory_depth = static_cast<int>(cols) - 1;
    return r;
}

std::size_t binomial(int n, int k) {
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

}  // namespace

TEST_SUITE("regressor") {
    TEST_CASE("layout column counts") {
        CHECK(basis_layout(3, 1).size() == 4);
        CHECK(basis_layout(3, 3).size() == 28);
        CHECK(column_count(3, 3) == 28);
        CHECK(column_count(0, 1) == 1);
        for (int m = 0; m <= 6; ++m) {
            for (int p = 1; p <= m + 1; ++p) {
                std::size_t expect = 0;
                for (int d = 1; d <= p; ++d) expect += binomial(m + 1, d) * static_cast<std::size_t>(d);
                CHECK(column_count(m, p) == expect);
                CHECK(basis_layout(m, p).size() == expect);
            }
        }
        CHECK_THROWS_AS((void)basis_layout(3, 5), ParameterError);
        CHECK_THROWS_AS((void)basis_layout(3, 0), ParameterError);
        CHECK_THROWS_AS((void)basis_layout(-1, 1), ParameterError);
    }

    TEST_CASE("layout order: single lags, then subsets lexicographic, carriers ascending") {
        const auto l = basis_layout(3, 3);
        for (int k = 0; k < 4; ++k) {
            CHECK(l[static_cast<std::size_t>(k)].subset == std::vector<int>{k});
            CHECK(l[static_cast<std::size_t>(k)].carrier_lag == k);
        }
        const std::vector<std::vector<int>> pairs = {{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}, {3, 2}};
        std::size_t idx = 4;
        for (const auto& s : pairs) {
            CHECK(l[idx].subset == s);
            CHECK(l[idx].carrier_lag == s[1]);
            CHECK(l[idx + 1].subset == s);
            CHECK(l[idx + 1].carrier_lag == s[0]);
            idx += 2;
        }
        CHECK(l[16].subset == std::vector<int>{2, 1, 0});
        CHECK(l[16].carrier_lag == 0);
        CHECK(l[18].carrier_lag == 2);
        CHECK(l[27].subset == std::vector<int>{3, 2, 1});
        CHECK(l[27].carrier_lag == 3);
        CHECK(l[4].subset_label() == "0,1");
        for (const auto& d : l) CHECK_NOTHROW(d.validate(3));
    }

    TEST_CASE("descriptor validation") {
        CHECK_THROWS_AS(BasisDescriptor({{0, 1}, 0}).validate(3), ParameterError);
        CHECK_THROWS_AS(BasisDescriptor({{4}, 4}).validate(3), ParameterError);
        CHECK_THROWS_AS(BasisDescriptor({{2, 1}, 0}).validate(3), ParameterError);
        CHECK_THROWS_AS(BasisDescriptor({{}, 0}).validate(3), ParameterError);
    }

    TEST_CASE("M=3, p_max=1 gives the delayed samples") {
        testgen::Gen g(1);
        const auto u = g.signal(200);
        const auto r = build_regressor_set(u, 3, 1);
        REQUIRE(r.n_columns() == 4);
        CHECK(r.n_rows == 197);
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t i = 0; i < r.n_rows; ++i) CHECK(r.columns[k][i] == u[i + 3 - k]);
    }

    TEST_CASE("augmented columns carry one lag and the magnitudes of the rest") {
        testgen::Gen g(2);
        const auto u = g.signal(300);
        const auto r = build_regressor_set(u, 3, 3);
        REQUIRE(r.n_columns() == 28);
        for (std::size_t k = 0; k < r.n_columns(); ++k) {
            const auto& d = r.descriptors[k];
            for (std::size_t i = 0; i < r.n_rows; i += 17) {
                Complex expect = u[i + 3 - static_cast<std::size_t>(d.carrier_lag)];
                for (int lag : d.subset)
                    if (lag != d.carrier_lag) expect *= std::abs(u[i + 3 - static_cast<std::size_t>(lag)]);
                CHECK(std::abs(r.columns[k][i] - expect) <= 1e-15 * std::max(1.0, std::abs(expect)));
            }
        }
    }

    TEST_CASE("constant input gives c |c|^(p-1) in every column") {
        const Complex c(0.6, -0.3);
        const ComplexSignal u(ComplexVector(100, c), 1.0, 1.0);
        const auto r = build_regressor_set(u, 3, 3);
        for (std::size_t k = 0; k < r.n_columns(); ++k) {
            const auto p = static_cast<double>(r.descriptors[k].dimension());
            const Complex expect = c * std::pow(std::abs(c), p - 1.0);
            for (const auto& v : r.columns[k]) CHECK(std::abs(v - expect) <= 1e-15);
        }
    }

    TEST_CASE("record length checks") {
        const ComplexSignal shortu(ComplexVector(40, 1.0), 1.0, 1.0);
        CHECK_THROWS_AS((void)build_regressor_set(shortu, 3, 1), ParameterError);
        const ComplexSignal ok(ComplexVector(41, 1.0), 1.0, 1.0);
        CHECK_NOTHROW((void)build_regressor_set(ok, 3, 1));
        CHECK_THROWS_AS((void)build_regressor_set(ok, 3, 5), ParameterError);
    }

    TEST_CASE("orthogonal inputs come out as unit-norm copies") {
        const std::size_t n = 64;
        RegressorMatrix r;
        r.n_rows = n;
        for (int k = 0; k < 4; ++k) {
            ComplexVector col(n);
            for (std::size_t i = 0; i < n; ++i)
                col[i] = (1.0 + k) * std::polar(1.0, 2.0 * M_PI * (3.0 * k + 1.0) * static_cast<double>(i) / n);
            r.descriptors.push_back({{k}, k});
            r.columns.push_back(col);
        }
        r.memory_depth = 3;
        const auto b = gram_schmidt(r);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(b.table.norms[k] == doctest::Approx((1.0 + static_cast<double>(k)) * std::sqrt(64.0)));
            for (const auto& p : b.table.projections[k]) CHECK(std::abs(p) <= 1e-12);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::abs(b.columns[k][i] * b.table.norms[k] - r.columns[k][i]) <= 1e-12);
        }
    }

    TEST_CASE("duplicate column is flagged degenerate") {
        testgen::Gen g(3);
        auto r = random_matrix(g, 500, 3);
        r.columns.push_back(r.columns[1]);
        r.descriptors.push_back({{3}, 3});
        const auto b = gram_schmidt(r);
        CHECK_FALSE(b.table.degenerate[0]);
        CHECK_FALSE(b.table.degenerate[1]);
        CHECK_FALSE(b.table.degenerate[2]);
        CHECK(b.table.degenerate[3]);
        CHECK(b.table.norms[3] == 0.0);
        for (const auto& v : b.columns[3]) CHECK(v == Complex{});
        // Reversal still reproduces the duplicate through its projections.
        CHECK(max_column_rel_error(r, reverse(b)) <= 1e-10);
    }

    TEST_CASE("random 3-column matrix against a direct projection oracle") {
        testgen::Gen g(4);
        auto r = random_matrix(g, 1000, 3);
        // Make the columns correlated.
        for (std::size_t i = 0; i < r.n_rows; ++i) {
            r.columns[1][i] += Complex(0.7, 0.2) * r.columns[0][i];
            r.columns[2][i] += Complex(-0.3, 0.5) * r.columns[1][i];
        }
        const auto b = gram_schmidt(r);
        CHECK(max_offdiag(b) <= 1e-9);

        // P[1][0] = sum conj(q0) a1 with q0 = a0 / |a0|.
        double n0 = 0.0;
        for (const auto& v : r.columns[0]) n0 += std::norm(v);
        n0 = std::sqrt(n0);
        Complex p10 = 0.0;
        for (std::size_t i = 0; i < r.n_rows; ++i) p10 += std::conj(r.columns[0][i] / n0) * r.columns[1][i];
        CHECK(std::abs(b.table.projections[1][0] - p10) <= 1e-10 * std::abs(p10));
        CHECK(b.table.norms[0] == doctest::Approx(n0).epsilon(1e-14));
    }

    TEST_CASE("first column keeps the direction of u(n)") {
        testgen::Gen g(5);
        const auto u = g.signal(2000);
        const auto r = build_regressor_set(u, 2, 2);
        const auto b = gram_schmidt(r);
        for (std::size_t i = 0; i < r.n_rows; ++i) {
            const Complex ratio = r.columns[0][i] / b.columns[0][i];
            CHECK(std::abs(ratio.imag()) <= 1e-9 * std::abs(ratio));
            CHECK(ratio.real() == doctest::Approx(b.table.norms[0]).epsilon(1e-12));
        }
    }

    TEST_CASE("reverse on one column rescales by the recorded norm") {
        testgen::Gen g(6);
        const auto r = random_matrix(g, 50, 1);
        const auto b = gram_schmidt(r);
        const auto back = reverse(b);
        for (std::size_t i = 0; i < r.n_rows; ++i) CHECK(std::abs(back.columns[0][i] - r.columns[0][i]) <= 1e-14);
    }

    TEST_CASE("28-column set of a generated record round-trips") {
        const auto u = generate_signal(20000, 400e6, 24e6, 1);
        const auto r = build_regressor_set(u, 3, 3);
        const auto b = gram_schmidt(r);
        CHECK(max_offdiag(b) <= 1e-9);
        CHECK(max_column_rel_error(r, reverse(b)) <= 1e-10);
    }

    TEST_CASE("reverse rejects malformed bases") {
        testgen::Gen g(7);
        auto b = gram_schmidt(random_matrix(g, 50, 3));
        b.table.projections[2].pop_back();
        CHECK_THROWS_AS((void)reverse(b), ReconstructionError);
        auto c = gram_schmidt(random_matrix(g, 50, 3));
        c.table.norms.pop_back();
        CHECK_THROWS_AS((void)reverse(c), ReconstructionError);
    }

    TEST_CASE("frozen projections reproduce the training columns") {
        const auto u = generate_signal(5000, 400e6, 24e6, 2);
        const auto r = build_regressor_set(u, 3, 3);
        const auto b = gram_schmidt(r);
        const auto q = apply_projections(r, b.table);
        for (std::size_t k = 0; k < q.size(); ++k)
            for (std::size_t i = 0; i < r.n_rows; i += 7) CHECK(std::abs(q[k][i] - b.columns[k][i]) <= 1e-9);
    }

    TEST_CASE("autocorrelation projections") {
        SUBCASE("white input has no off-diagonal projections") {
            const ComplexVector r_u = {1.0, 0.0, 0.0, 0.0};
            const auto t = projections_from_autocorrelation(r_u, 3);
            for (const auto& row : t.projections)
                for (const auto& p : row) CHECK(p == Complex{});
            for (double n : t.norms) CHECK(n == doctest::Approx(1.0));
        }
        SUBCASE("M=0 has an empty off-diagonal table") {
            const ComplexVector r_u = {2.0};
            const auto t = projections_from_autocorrelation(r_u, 0);
            REQUIRE(t.size() == 1);
            CHECK(t.projections[0].empty());
            CHECK(t.norms[0] == doctest::Approx(std::sqrt(2.0)));
        }
        SUBCASE("errors") {
            const ComplexVector bad = {0.0, 0.1};
            CHECK_THROWS_AS((void)projections_from_autocorrelation(bad, 1), ParameterError);
            const ComplexVector neg = {-1.0, 0.1};
            CHECK_THROWS_AS((void)projections_from_autocorrelation(neg, 1), ParameterError);
            const ComplexVector few = {1.0};
            CHECK_THROWS_AS((void)projections_from_autocorrelation(few, 2), ParameterError);
        }
        SUBCASE("sinc lags match empirical projections of a long record") {
            const double fs = 400e6, bw = 120e6;
            const auto u = generate_signal(100000, fs, bw, 3);
            const int m = 3;
            const auto b = gram_schmidt(build_regressor_set(u, m, 1));
            ComplexVector r_u(m + 1);
            for (int k = 0; k <= m; ++k) {
                const double x = M_PI * k * bw / fs;
                r_u[static_cast<std::size_t>(k)] = k == 0 ? 1.0 : std::sin(x) / x;
            }
            const auto t = projections_from_autocorrelation(r_u, m).scaled_energy(static_cast<double>(b.n_rows));
            double diff = 0.0, ref = 0.0;
            for (std::size_t k = 0; k < t.size(); ++k) {
                for (std::size_t l = 0; l < k; ++l) {
                    diff += std::norm(t.projections[k][l] - b.table.projections[k][l]);
                    ref += std::norm(b.table.projections[k][l]);
                }
                diff += std::pow(t.norms[k] - b.table.norms[k], 2);
                ref += std::pow(b.table.norms[k], 2);
            }
            CHECK(std::sqrt(diff / ref) <= 5e-2);
            for (std::size_t k = 1; k < t.size(); ++k) {
                const Complex e = b.table.projections[k][k - 1];
                CHECK(std::abs(t.projections[k][k - 1] - e) <= 5e-2 * std::abs(e));
            }
        }
    }

    TEST_CASE("property: orthogonality and losslessness on random layouts") {
        testgen::Gen g(8);
        for (int trial = 0; trial < 15; ++trial) {
            const int m = g.integer(0, 4);
            const int p = g.integer(1, m + 1);
            const auto u = g.signal(static_cast<std::size_t>(g.integer(400, 3000)), 400e6, g.uniform(10e6, 200e6));
            const auto r = build_regressor_set(u, m, p);
            const auto b = gram_schmidt(r);
            CHECK(max_offdiag(b) <= 1e-9);
            CHECK(max_column_rel_error(r, reverse(b)) <= 1e-10);
            for (std::size_t k = 0; k < b.columns.size(); ++k)
                if (!b.table.degenerate[k]) CHECK(euclidean_norm(b.columns[k]) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("gram_schmidt needs as many rows as columns") {
        testgen::Gen g(9);
        const auto r = random_matrix(g, 3, 4);
        CHECK_THROWS_AS((void)gram_schmidt(r), ParameterError);
    }
}
