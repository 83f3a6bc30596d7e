#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"
#include "kernelpa/error.hpp"
#include "kernelpa/model_io.hpp"
#include "kernelpa/npmodel.hpp"

using namespace kernelpa;

namespace {

double telescoped(const ContributionReport& r) {
    double s = 0.0;
    for (const auto& row : r.rows) s += row.dnmse_db;
    return s;
}

// PA with a static nonlinearity on u(n) plus linear taps on u(n-1), u(n-2).
ComplexSignal in_class_pa(const ComplexSignal& u) {
    ComplexVector y(u.size(), 0.0);
    for (std::size_t n = 2; n < u.size(); ++n) {
        const Complex a = u[n];
        y[n] = a * (Complex(1.0, 0.05) - Complex(0.06, -0.02) * std::norm(a)) + Complex(0.1, -0.04) * u[n - 1] +
               Complex(-0.06, 0.03) * u[n - 2];
    }
    return u.with_samples(y, "in-class", 2);
}

}  // namespace

TEST_SUITE("npmodel") {
    TEST_CASE("FitOptions validation") {
        FitOptions o;
        CHECK_NOTHROW(o.validate());
        o.max_dimension = 5;
        CHECK_THROWS_AS(o.validate(), ParameterError);
        o = {};
        o.grid_points = 1;
        CHECK_THROWS_AS(o.validate(), ParameterError);
        o = {};
        o.aperture_fraction = 1.0;
        CHECK_THROWS_AS(o.validate(), ParameterError);
        o = {};
        o.memory_depth = -1;
        CHECK_THROWS_AS(o.validate(), ParameterError);
    }

    TEST_CASE("magnitude_phase_transform") {
        testgen::Gen g(1);
        const auto u = g.signal(2000);
        const auto b = gram_schmidt(build_regressor_set(u, 2, 2));
        SUBCASE("y equal to the first column gives z = |q0|") {
            const auto mp = magnitude_phase_transform(b, b.columns[0]);
            for (std::size_t n = 0; n < b.n_rows; ++n) {
                CHECK(std::abs(mp.z[n].imag()) <= 1e-15);
                CHECK(mp.z[n].real() == doctest::Approx(std::abs(b.columns[0][n])).epsilon(1e-13));
                CHECK(mp.valid[n] == 1);
            }
        }
        SUBCASE("magnitudes are nonnegative and |z| = |y|") {
            const auto y = g.white(b.n_rows);
            const auto mp = magnitude_phase_transform(b, y);
            REQUIRE(mp.x.size() == b.columns.size());
            for (const auto& col : mp.x)
                for (double v : col) CHECK(v >= 0.0);
            for (std::size_t n = 0; n < b.n_rows; ++n)
                CHECK(std::abs(mp.z[n]) == doctest::Approx(std::abs(y[n])).epsilon(1e-13));
        }
        SUBCASE("zero first-column samples are flagged") {
            auto uz = ComplexVector(u.samples().begin(), u.samples().end());
            uz[100] = 0.0;
            const auto bz = gram_schmidt(build_regressor_set(u.with_samples(uz), 0, 1));
            const auto mp = magnitude_phase_transform(bz, g.white(bz.n_rows));
            CHECK(mp.valid[100] == 0);
            CHECK(mp.valid[101] == 1);
        }
        CHECK_THROWS_AS((void)magnitude_phase_transform(b, g.white(10)), ParameterError);
    }

    TEST_CASE("linear memoryless PA is recovered") {
        const auto u = generate_signal(100000, 400e6, 24e6, 3);
        const Complex gain(2.0, -0.7);
        const auto y = u.scaled(gain);
        FitOptions o;
        o.memory_depth = 0;
        o.max_dimension = 1;
        o.refine = true;
        const auto m = fit(u, y, o);
        REQUIRE(m.entries.size() == 1);
        CHECK(nmse(y, predict(m, u)) <= -60.0);
        // g0(x) tracks G * norm0 * x across the interior of the grid.
        const auto& f = *m.entries[0].estimate;
        const double n0 = m.projections.norms[0];
        for (std::size_t i = 5; i + 5 < f.size(); ++i) {
            if (!f.defined[i]) continue;
            CHECK(std::abs(f.values[i] - gain * n0 * f.grid[i]) <= 1e-2 * std::abs(gain) * n0 * f.grid[i]);
        }
    }

    TEST_CASE("reference PA: training NMSE and determinism") {
        const auto& sc = testgen::reference_scenario();
        const auto m = fit(sc.u, sc.y);
        CHECK(m.entries.size() == 28);
        CHECK(m.blocks().size() == 14);
        CHECK(nmse(sc.y, predict(m, sc.u)) <= -35.0);
        CHECK(m.training_samples == sc.u.size() - 2 - 3);

        const auto second = fit(sc.u, sc.y);
        CHECK(second == m);
        CHECK(to_text(second) == to_text(m));
    }

    TEST_CASE("predict on training data reproduces the fit-time residual") {
        const auto& sc = testgen::reference_scenario();
        const auto u = testgen::head(sc.u);
        const auto y = testgen::head(sc.y);
        const auto m = fit(u, y);

        // Fit-time view: the training orthogonal columns themselves.
        const std::size_t skip = 2;
        const auto b = gram_schmidt(build_regressor_set(u.slice(skip, u.size() - skip), 3, 3));
        ComplexVector yhat(b.n_rows, 0.0);
        for (std::size_t k = 0; k < b.columns.size(); ++k) {
            const auto& e = m.entries[k];
            if (!e.active) continue;
            for (std::size_t n = 0; n < b.n_rows; ++n) {
                const double a = std::abs(b.columns[k][n]);
                if (a > 0.0) yhat[n] += evaluate(*e.estimate, a) * (b.columns[k][n] / a);
            }
        }
        const auto target = y.samples().subspan(skip + 3);
        const double fit_nmse = nmse(target, yhat);
        CHECK(std::abs(nmse(y, predict(m, u)) - fit_nmse) <= 0.1);
    }

    TEST_CASE("zero input gives zero output") {
        const auto& sc = testgen::reference_scenario();
        const auto m = fit(testgen::head(sc.u), testgen::head(sc.y));
        const ComplexSignal zero(ComplexVector(500, 0.0), 400e6, 24e6);
        const auto out = predict(m, zero);
        for (const auto& v : out.samples()) CHECK(v == Complex{});
        CHECK(out.warmup() == 3);
    }

    TEST_CASE("validation on the held-out 90% stays near the training NMSE" * doctest::may_fail()) {
        const auto& sc = testgen::reference_scenario();
        const auto m = fit(testgen::head(sc.u), testgen::head(sc.y));
        const double train = nmse(testgen::head(sc.y), predict(m, testgen::head(sc.u)));
        const double val = nmse(testgen::tail(sc.y), predict(m, testgen::tail(sc.u)));
        MESSAGE("training " << train << " dB, validation " << val << " dB");
        CHECK(std::abs(val - train) <= 1.0);
    }

    TEST_CASE("contribution table") {
        const auto& sc = testgen::reference_scenario();
        const auto u = testgen::head(sc.u);
        const auto y = testgen::head(sc.y);
        const auto m = fit(u, y);
        const auto r = contribution_table(m, testgen::tail(sc.u), testgen::tail(sc.y));
        REQUIRE(r.rows.size() == 14);
        CHECK(r.rows[0].basis == "g0");
        CHECK(r.rows[0].subset == "0");
        CHECK(r.rows[4].basis == "g0_1");
        CHECK(r.rows[4].subset == "0;1");
        CHECK(r.rows[13].basis == "g1_2_3");
        CHECK(std::abs(telescoped(r) - r.total_nmse_db) <= 1e-9);
        CHECK(std::abs(r.total_nmse_db - nmse(testgen::tail(sc.y), predict(m, testgen::tail(sc.u)))) <= 1e-9);
        // g0 is the largest contributor.
        for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(std::abs(r.rows[0].dnmse_db) > std::abs(r.rows[i].dnmse_db));
        CHECK(r.order.size() == 14);
    }

    TEST_CASE("single-basis model has one row equal to the total") {
        testgen::Gen g(2);
        const auto u = g.signal(5000);
        const auto y = u.scaled(Complex(0.5, 0.5));
        FitOptions o;
        o.memory_depth = 0;
        o.max_dimension = 1;
        const auto m = fit(u, y, o);
        const auto r = contribution_table(m, u, y);
        REQUIRE(r.rows.size() == 1);
        CHECK(r.rows[0].dnmse_db == r.total_nmse_db);
    }

    TEST_CASE("property: telescoping holds for random models and data") {
        testgen::Gen g(3);
        for (int t = 0; t < 6; ++t) {
            FitOptions o;
            o.memory_depth = g.integer(0, 3);
            o.max_dimension = g.integer(1, o.memory_depth + 1);
            o.grid_points = static_cast<std::size_t>(g.integer(10, 80));
            o.aperture_fraction = g.uniform(0.005, 0.1);
            o.refine = g.integer(0, 1) == 1;
            const auto u = g.signal(4000);
            auto cfg = default_config();
            cfg.c(3, 0) *= g.uniform(0.5, 2.0);
            const auto y = reference_pa(u, cfg);
            auto m = fit(u, y, o);
            // Random deactivations keep g0.
            for (std::size_t k = 1; k < m.entries.size(); ++k)
                if (g.integer(0, 3) == 0) m.entries[k].active = false;
            const auto v = g.signal(4000);
            const auto r = contribution_table(m, v, reference_pa(v, cfg));
            CHECK(std::abs(telescoped(r) - r.total_nmse_db) <= 1e-9);
        }
    }

    TEST_CASE("pruning") {
        const auto& sc = testgen::reference_scenario();
        const auto u = testgen::head(sc.u);
        const auto y = testgen::head(sc.y);
        const auto m = fit(u, y);
        const auto uv = testgen::tail(sc.u);
        const auto yv = testgen::tail(sc.y);
        const double full = nmse(yv, predict(m, uv));
        const auto report = contribution_table(m, uv, yv);

        SUBCASE("small threshold drops only negligible rows") {
            const auto p = prune(m, report, -0.01);
            for (std::size_t b = 0; b < report.rows.size(); ++b) {
                const auto block = m.blocks()[b];
                const bool expect_active = b == 0 || std::abs(report.rows[b].dnmse_db) >= 0.01;
                CHECK(p.entries[block.first].active == (expect_active && m.entries[block.first].active));
            }
            CHECK(std::abs(nmse(yv, predict(p, uv)) - full) < 0.1);
        }
        SUBCASE("Table-I style pruning at 0.1 dB") {
            const auto p = prune(m, report, -0.1);
            CHECK(p.active_count() < m.active_count());
            CHECK(std::abs(nmse(yv, predict(p, uv)) - full) <= 0.5);
        }
        SUBCASE("huge threshold leaves only g0") {
            const auto p = prune(m, report, -1000.0);
            CHECK(p.active_count() == 1);
            CHECK(p.entries[0].active);
        }
        SUBCASE("estimates of the remaining bases are untouched") {
            const auto p = prune(m, report, -0.1);
            for (std::size_t k = 0; k < m.entries.size(); ++k) CHECK(p.entries[k].estimate == m.entries[k].estimate);
            CHECK(p.projections == m.projections);
        }
        SUBCASE("errors") {
            CHECK_THROWS_AS((void)prune(m, report, 0.0), ParameterError);
            CHECK_THROWS_AS((void)prune(m, report, 0.5), ParameterError);
            auto bad = report;
            bad.rows.pop_back();
            CHECK_THROWS_AS((void)prune(m, bad, -0.1), ParameterError);
        }
        SUBCASE("data overload matches the report overload") {
            CHECK(prune(m, uv, yv, -0.1) == prune(m, report, -0.1));
        }
    }

    TEST_CASE("in-class noiseless PA reaches -50 dB") {
        const auto u = generate_signal(100000, 400e6, 24e6, 4);
        const auto y = in_class_pa(u);
        FitOptions o;
        o.refine = true;
        const auto m = fit(u, y, o);
        const double e = nmse(y, predict(m, u));
        MESSAGE("in-class NMSE " << e << " dB");
        CHECK(e <= -50.0);
    }

    TEST_CASE("property: gain-rotation equivariance") {
        testgen::Gen g(5);
        for (int t = 0; t < 4; ++t) {
            const auto u = g.signal(6000);
            const auto y = reference_pa(u, default_config());
            const Complex c = g.unit();
            FitOptions o;
            o.memory_depth = g.integer(0, 3);
            o.max_dimension = g.integer(1, o.memory_depth + 1);
            const auto m = fit(u, y, o);
            const auto mc = fit(u.scaled(c), y.scaled(c), o);
            const auto v = g.signal(3000);
            const auto expect = predict(m, v).scaled(c);
            const auto got = predict(mc, v.scaled(c));
            CHECK(testgen::max_rel_diff(expect, got) <= 1e-9);
        }
    }

    TEST_CASE("fit and predict argument errors") {
        testgen::Gen g(6);
        const auto u = g.signal(1000);
        CHECK_THROWS_AS((void)fit(u, u.slice(0, 500)), ParameterError);
        const ComplexSignal other(ComplexVector(u.samples().begin(), u.samples().end()), 200e6, 24e6);
        CHECK_THROWS_AS((void)fit(u, other), ParameterError);
        auto m = fit(u, reference_pa(u, default_config()));
        CHECK_THROWS_AS((void)predict(m, u.slice(0, 3)), ParameterError);
        for (auto& e : m.entries) e.active = false;
        CHECK_THROWS_AS((void)predict(m, u), ParameterError);
    }

    TEST_CASE("model validation catches broken invariants") {
        testgen::Gen g(7);
        const auto u = g.signal(2000);
        const auto m = fit(u, reference_pa(u, default_config()));
        CHECK_NOTHROW(m.validate());
        auto a = m;
        std::swap(a.entries[0], a.entries[1]);
        CHECK_THROWS_AS(a.validate(), ParameterError);
        auto b = m;
        b.entries[3].estimate.reset();
        CHECK_THROWS_AS(b.validate(), ParameterError);
        auto c = m;
        c.projections.norms.pop_back();
        CHECK_THROWS_AS(c.validate(), ParameterError);
    }
}
