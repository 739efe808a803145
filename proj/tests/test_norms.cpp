#include "doctest.h"
#include "helpers.hpp"
#include "kgs/decomposition.hpp"
#include "kgs/norms.hpp"

using namespace kgs;
using kgs::testing::random_field;

namespace {

const Grid grid(2, 16, 4.0 * M_PI);
const TimeWindow window{0.0, 4.0, 64};

SpaceTimeField noise(std::uint64_t seed, const Grid& g = grid, const TimeWindow& w = window) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    SpaceTimeField f(g, w, Representation::physical);
    for (auto& v : f.values()) v = complex(normal(rng), normal(rng));
    return f;
}

SpectralField packet(const Grid& g, double k) {
    const double c = 0.5 * g.period();
    return SpectralField::from_function(g, [=](const std::array<double, 3>& x) {
        const double dx = x[0] - c, dy = x[1] - c;
        return std::polar(std::exp(-(dx * dx + dy * dy) / 2.0), k * x[0]);
    });
}

}  // namespace

TEST_CASE("bourgain spec validation") {
    CHECK_THROWS_AS(bourgain_norm(noise(1), {0.0, 1.5}), ContractViolation);
    CHECK_THROWS_AS(bourgain_norm(noise(1), {0.0, 0.3, Dispersion::schrodinger, 0.0}), ContractViolation);
    CHECK_THROWS_AS(bourgain_norm(noise(1), {0.0, 0.3, Dispersion::schrodinger, 0.2}), ContractViolation);
    CHECK(BourgainSpec::decorate(0.5, +1) == doctest::Approx(0.51));
    CHECK(BourgainSpec::decorate(5.0 / 12.0, -1, 0.02) == doctest::Approx(5.0 / 12.0 - 0.02));
}

TEST_CASE("bourgain norm basics") {
    CHECK(bourgain_norm(SpaceTimeField(grid, window, Representation::physical), {0.3, 0.6}) == 0.0);
    auto f = noise(2);
    const double l2 = bourgain_norm(f, {0.0, 0.0});
    CHECK(std::abs(l2 - f.l2_norm()) <= 1e-10 * l2);
    CHECK(std::abs(f.to_spectral().l2_norm() - f.l2_norm()) <= 1e-12 * l2);
    // b = 0 gives L^2_t H^s_x, computed slice by slice.
    double sum = 0.0;
    for (int k = 0; k < window.samples; ++k) sum += std::pow(sobolev_norm(f.slice(k), 0.7), 2) * window.step();
    CHECK(bourgain_norm(f, {0.7, 0.0}) == doctest::Approx(std::sqrt(sum)).epsilon(1e-10));
}

TEST_CASE("bourgain norm is a norm and monotone in b") {
    auto f = noise(3), g = noise(4), h = noise(5);
    for (auto kind : {Dispersion::schrodinger, Dispersion::wave_plus, Dispersion::wave_minus}) {
        const BourgainSpec spec{-0.5, 0.45, kind};
        CHECK(bourgain_norm(complex(0.0, -2.5) * f, spec) == doctest::Approx(2.5 * bourgain_norm(f, spec)).epsilon(1e-12));
        CHECK(bourgain_norm(f + g, spec) <= bourgain_norm(f, spec) + bourgain_norm(g, spec));
        CHECK(bourgain_norm(g + h, spec) <= bourgain_norm(g, spec) + bourgain_norm(h, spec));
        double previous = 0.0;
        for (double b : {-0.6, -0.2, 0.0, 0.3, 0.5, 0.9}) {
            const double v = bourgain_norm(f, {0.2, b, kind});
            CHECK(v >= previous);
            previous = v;
        }
    }
}

TEST_CASE("modulation pieces carry weight comparable to L^b") {
    auto f = noise(6);
    for (auto kind : {Dispersion::schrodinger, Dispersion::wave_minus}) {
        for (double L : {1.0, 4.0, 16.0, 64.0}) {
            auto piece = modulation_project(f, L, kind).field;
            const double l2 = piece.l2_norm();
            for (double b : {-0.5, 0.3, 0.7}) {
                const double ratio = bourgain_norm(piece, {0.0, b, kind}) / (std::pow(L, b) * l2);
                CHECK(ratio >= std::pow(2.0, -std::abs(b)) * (1.0 - 1e-12));
                CHECK(ratio <= std::pow(2.0, std::abs(b)) * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("windowed free solution norm is stable under refinement") {
    const TimeWindow w{};
    std::vector<double> ratio;
    for (int M : {32, 64}) {
        const Grid g(2, M, 8.0 * M_PI);
        auto u0 = packet(g, 1.0);
        auto f = SpaceTimeField::free_solution(u0, w, Dispersion::schrodinger).windowed();
        ratio.push_back(bourgain_norm(f, {1.0, 0.55}) / sobolev_norm(u0, 1.0));
    }
    CHECK(ratio[1] == doctest::Approx(ratio[0]).epsilon(0.1));
    // The default window cutoff is a shifted interval cutoff with T = 4.
    CHECK(ratio[0] == doctest::Approx(cutoff_sobolev_norm(4.0, 0.55)).epsilon(0.02));
}

TEST_CASE("restricted norm surrogate") {
    auto u0 = packet(grid, 0.5).to_spectral();
    const auto free = [&](double t) { return free_schrodinger(u0, t); };
    CHECK(restricted_norm([&](double) { return SpectralField::zeros(grid); }, grid, 1.0, {0.0, 0.4}) == 0.0);
    double previous = 0.0;
    for (double T : {0.125, 0.25, 0.5, 1.0, 2.0}) {
        const double v = restricted_norm(free, grid, T, {0.0, 0.4});
        CHECK(v >= previous);
        previous = v;
    }
    for (double T : {0.25, 1.0}) {
        const double v = restricted_norm(free, grid, T, {0.0, 0.55});
        const double c = cutoff_sobolev_norm(T, 0.55) * sobolev_norm(u0, 0.0);
        CHECK(v / c >= 0.25);
        CHECK(v / c <= 4.0);
        CHECK(v / c == doctest::Approx(1.0).epsilon(0.02));
    }
    auto short_window = SpaceTimeField::free_solution(u0, {0.0, 1.0, 32}, Dispersion::schrodinger);
    CHECK_THROWS_AS(restricted_norm(short_window, 0.5, {0.0, 0.3}), ContractViolation);
}

TEST_CASE("cutoff sobolev norm") {
    // b = 0: the L^2 norm of the cutoff, by direct quadrature.
    double sum = 0.0;
    const double h = 1e-4;
    for (double t = -1.0; t <= 1.0; t += h) sum += std::pow(interval_cutoff(1.0, t + 0.5), 2) * h;
    CHECK(cutoff_sobolev_norm(1.0, 0.0) == doctest::Approx(std::sqrt(sum)).epsilon(1e-6));
    CHECK(cutoff_sobolev_norm(0.5, 0.0) == doctest::Approx(cutoff_sobolev_norm(1.0, 0.0) / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("time localization slope") {
    auto u0 = packet(grid, 0.5).to_spectral();
    const auto free = [&](double t) { return free_schrodinger(u0, t); };
    const std::vector<double> ladder{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
    CHECK(std::abs(time_localization_slope(free, grid, 0.0, 0.3, 0.3, ladder).slope) < 1e-12);
    CHECK(time_localization_slope(free, grid, 0.0, 0.4, 0.2, ladder).slope == doctest::Approx(0.2).epsilon(0.5));
    CHECK(time_localization_slope(free, grid, 0.0, 0.45, 0.0, ladder).slope == doctest::Approx(0.45).epsilon(0.12 / 0.45));
    CHECK_THROWS_AS(time_localization_slope([&](double) { return SpectralField::zeros(grid); }, grid, 0.0, 0.4, 0.2,
                                            ladder),
                    DegenerateInput);
    CHECK_THROWS_AS(time_localization_slope(free, grid, 0.0, 0.2, 0.4, ladder), ContractViolation);
}

TEST_CASE("strichartz norms") {
    auto f = noise(7);
    CHECK(strichartz_norm(f, 2.0, 2.0) == doctest::Approx(f.l2_norm()).epsilon(1e-10));
    double worst = 0.0;
    for (int k = 0; k < window.samples; ++k) worst = std::max(worst, lebesgue_norm(f.slice(k), 3.0));
    CHECK(std::abs(strichartz_norm(f, kInfinity, 3.0) - worst) <= 1e-12 * worst);

    auto g0 = random_field(grid, 8);
    auto constant = SpaceTimeField::sample(grid, window, [&](double) { return g0; });
    for (double q : {2.0, 4.0, 7.0})
        CHECK(strichartz_norm(constant, q, 4.0, std::pair{1.0, 3.0}) ==
              doctest::Approx(std::pow(2.0, 1.0 / q) * lebesgue_norm(g0, 4.0)).epsilon(1e-12));
    CHECK(lebesgue_norm(g0, kInfinity) == doctest::Approx(g0.max_abs()));
    CHECK(lebesgue_norm(g0, 2.0) == doctest::Approx(g0.l2_norm()).epsilon(1e-12));
}

TEST_CASE("empirical strichartz constant is stable across data") {
    const Grid g(2, 32, 8.0 * M_PI);
    const TimeWindow w{0.0, 1.0, 32};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> ratios;
    for (int trial = 0; trial < 10; ++trial) {
        const double cx = 4.0 * M_PI + 3.0 * uni(rng), cy = 4.0 * M_PI + 3.0 * uni(rng), k = 0.5 * uni(rng);
        auto u0 = SpectralField::from_function(g, [&](const std::array<double, 3>& x) {
            const double dx = x[0] - cx, dy = x[1] - cy;
            return std::polar(std::exp(-(dx * dx + dy * dy) / 2.0), k * x[1]);
        });
        auto f = SpaceTimeField::free_solution(u0, w, Dispersion::schrodinger);
        ratios.push_back(strichartz_norm(f, 4.0, 4.0, std::pair{0.0, 1.0 - w.step()}) / u0.l2_norm());
    }
    double mean = 0.0;
    for (double r : ratios) mean += r / ratios.size();
    for (double r : ratios) CHECK(std::abs(r / mean - 1.0) <= 0.2);
}

TEST_CASE("schrodinger admissibility") {
    CHECK(schrodinger_admissible(kInfinity, 2.0, 2));
    CHECK(schrodinger_admissible(4.0, 4.0, 2));
    CHECK(schrodinger_admissible(4.0, 3.0, 3));
    CHECK_FALSE(schrodinger_admissible(2.0, 4.0, 2));
    CHECK_FALSE(schrodinger_admissible(2.0, kInfinity, 2));
    CHECK(schrodinger_admissible(2.0, 6.0, 3));
    CHECK_FALSE(schrodinger_admissible(1.5, 6.0, 3));
}

TEST_CASE("wave admissibility instances") {
    const double e = 0.01;
    auto trivial = wave_admissible(kInfinity, 2.0, kInfinity, 2.0, -1.0, 3);
    CHECK(trivial.mu == 0.0);
    CHECK(trivial.admissible);

    // D = 3: r~ = inf-, q~ = 2+ on the pair line, rho from mu matching.
    const double r3 = 1.0 / e, q3 = 2.0 / (1.0 - 2.0 * e);
    auto exact3 = wave_admissible(kInfinity, 2.0, q3, r3, -2.0 * e, 3);
    CHECK(exact3.admissible);
    CHECK(wave_admissible(kInfinity, 2.0, q3, r3, -e, 3, 3.0 * e).admissible);
    CHECK_FALSE(wave_admissible(kInfinity, 2.0, q3, r3, e, 3, 0.5 * e).admissible);

    // D = 2: q~ = 4+, r~ = inf-; the matching rho is -1/4 - 3e/2.
    const double q2 = 4.0 / (1.0 - 2.0 * e);
    auto exact2 = wave_admissible(kInfinity, 2.0, q2, r3, -0.25 - 1.5 * e, 2);
    CHECK(exact2.admissible);
    CHECK(wave_admissible(kInfinity, 2.0, q2, r3, -0.25 + e, 2, 3.0 * e).admissible);
    CHECK_FALSE(wave_admissible(kInfinity, 2.0, q2, r3, -0.25 + e, 2).admissible);
    CHECK_FALSE(wave_admissible(kInfinity, 2.0, 4.0, kInfinity, -0.25, 2).admissible);
}

TEST_CASE("log slope fit") {
    CHECK(fit_log_slope({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(fit_log_slope({1.0}, {1.0}), DegenerateInput);
    CHECK_THROWS_AS(fit_log_slope({1.0, 2.0}, {1.0, 0.0}), DegenerateInput);
}
