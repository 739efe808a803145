#include <set>
#include <tuple>

#include "doctest.h"
#include "helpers.hpp"
#include "kgs/decomposition.hpp"

using namespace kgs;
using kgs::testing::random_field;
using kgs::testing::relative_error;

namespace {

const Grid grid(2, 32, 2.0 * M_PI);

SpaceTimeField random_space_time(const Grid& g, const TimeWindow& w, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    SpaceTimeField f(g, w, Representation::physical);
    for (auto& v : f.values()) v = complex(normal(rng), normal(rng));
    return f;
}

double st_relative_error(const SpaceTimeField& a, const SpaceTimeField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("bump shape") {
    for (double r = -3.0; r <= 3.0; r += 0.001) {
        const double v = psi(r);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v == psi(-r));
        if (std::abs(r) <= 1.0) CHECK(v == 1.0);
        if (std::abs(r) >= 2.0) CHECK(v == 0.0);
    }
    CHECK(psi(1.5) == doctest::Approx(0.5));
}

TEST_CASE("dyadic shells sum to one with the stated supports") {
    double worst = 0.0;
    for (double r = 0.0; r <= 700.0; r += 0.0137) {
        double sum = 0.0;
        for (double N : dyadic_levels(r)) {
            const double v = psi_dyadic(N, r);
            sum += v;
            if (N == 1.0) {
                if (r >= 2.0) CHECK(v == 0.0);
            } else if (r <= N / 2.0 || r >= 2.0 * N) {
                CHECK(v == 0.0);
            }
        }
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    CHECK(worst <= 1e-12);
    CHECK(is_dyadic(1.0));
    CHECK(is_dyadic(64.0));
    CHECK_FALSE(is_dyadic(3.0));
    CHECK_FALSE(is_dyadic(0.5));
}

TEST_CASE("angular partition of unity and sector supports") {
    for (int A : {1, 2, 3, 8, 64}) {
        double worst = 0.0;
        for (double theta = -M_PI; theta <= M_PI; theta += 0.0007) {
            double sum = 0.0;
            for (int j = 0; j < A; ++j) {
                const double w = angular_weight(A, j, theta);
                sum += w;
                if (!in_sector_support(A, j, theta)) CHECK(w == 0.0);
                CHECK(w == doctest::Approx(angular_weight(A, j, theta + M_PI)).epsilon(1e-12));
            }
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        CHECK(worst <= 1e-12);
    }
    CHECK_THROWS_AS(angular_weight(8, 8, 0.0), ContractViolation);
}

TEST_CASE("frequency projection examples") {
    auto w = SpectralField::plane_wave(grid, {3, 0, 0});
    auto sum = frequency_project(w, 2.0).field + frequency_project(w, 4.0).field;
    CHECK(relative_error(sum, w) < 1e-13);
    for (double N : {1.0, 8.0, 16.0}) CHECK(frequency_project(w, N).field.max_abs() < 1e-14);

    auto c = SpectralField::from_function(grid, [](auto&) { return complex(1.0, 1.0); });
    CHECK(relative_error(frequency_project(c, 1.0).field, c) < 1e-14);
    CHECK(frequency_project(c, 2.0).field.max_abs() < 1e-15);
    CHECK(frequency_project(c, 4.0).labels.N == 4.0);
    CHECK_THROWS_AS(frequency_project(c, 3.0), ContractViolation);
}

TEST_CASE("frequency projections reconstruct, square and commute") {
    for (const Grid& g : {grid, Grid(3, 16, 4.0 * M_PI)}) {
        auto f = random_field(g, 3);
        SpectralField sum = SpectralField::zeros(g, Representation::physical);
        for (double N : dyadic_levels(max_frequency(g))) sum += frequency_project(f, N).field;
        CHECK(relative_error(sum, f) <= 1e-12);
    }
    auto f = random_field(grid, 8).to_spectral();
    auto twice = frequency_project(frequency_project(f, 4.0).field, 4.0).field;
    auto squared = apply_multiplier(f, [&](std::size_t i) {
        const double v = psi_dyadic(4.0, std::sqrt(grid.xi_squared(i)));
        return complex(v * v);
    });
    CHECK(relative_error(twice, squared) < 1e-13);

    auto a = frequency_project(f, 1.0).field, b = frequency_project(f, 4.0).field;
    complex inner = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) inner += std::conj(a[i]) * b[i];
    CHECK(std::abs(inner) <= 1e-12 * a.l2_norm() * b.l2_norm());

    auto p = frequency_project(free_schrodinger(f, 0.7), 8.0).field;
    auto q = free_schrodinger(frequency_project(f, 8.0).field, 0.7);
    CHECK(relative_error(p, q) < 1e-12);
    auto r = frequency_project(free_half_wave(f, 0.7, WaveSign::minus), 2.0).field;
    CHECK(relative_error(r, free_half_wave(frequency_project(f, 2.0).field, 0.7, WaveSign::minus)) < 1e-12);
}

TEST_CASE("angular projection") {
    auto f = random_field(grid, 5);
    CHECK(relative_error(angular_project(f, 1, 0).field, f) < 1e-14);
    for (int A : {8, 64}) {
        SpectralField sum = SpectralField::zeros(grid, Representation::physical);
        for (int j = 0; j < A; ++j) sum += angular_project(f, A, j).field;
        CHECK(relative_error(sum, f) <= 1e-12);
    }
    auto w = SpectralField::plane_wave(grid, {5, 0, 0});
    for (int j = 0; j < 64; ++j) {
        const double mass = angular_project(w, 64, j).field.l2_norm();
        if (j >= 2 && j <= 62) CHECK(mass == 0.0);
    }
    CHECK(angular_project(w, 64, 0).field.l2_norm() > 0.0);

    auto real = random_field(grid, 6, true);
    for (int j = 0; j < 8; ++j) CHECK(imaginary_residue(angular_project(real, 8, j).field) < 1e-12);
    CHECK_THROWS_AS(angular_project(random_field(Grid(3, 8, 1.0), 1), 4, 0), UnsupportedDimension);
}

TEST_CASE("modulation projections reconstruct space-time noise") {
    const Grid g(2, 16, 2.0 * M_PI);
    const TimeWindow w{0.0, 2.0, 32};
    auto f = random_space_time(g, w, 12);
    for (auto kind : {Dispersion::schrodinger, Dispersion::wave_plus, Dispersion::wave_minus}) {
        SpaceTimeField sum(g, w, Representation::physical);
        for (double L : dyadic_levels(max_modulation(g, w, kind))) sum += modulation_project(f, L, kind).field;
        CHECK(st_relative_error(sum, f) <= 1e-12);
    }
}

TEST_CASE("windowed free solution concentrates at low modulation") {
    const Grid g(2, 32, 8.0 * M_PI);
    auto u0 = SpectralField::from_function(g, [&](const std::array<double, 3>& x) {
        const double dx = x[0] - 4.0 * M_PI, dy = x[1] - 4.0 * M_PI;
        return complex(std::exp(-(dx * dx + dy * dy) / 4.0), 0.0);
    });
    const TimeWindow w{};
    auto f = SpaceTimeField::free_solution(u0, w, Dispersion::schrodinger).windowed();
    const double total = std::pow(f.l2_norm(), 2);
    double low = 0.0;
    for (double L : {1.0, 2.0, 4.0}) low += std::pow(modulation_project(f, L, Dispersion::schrodinger).field.l2_norm(), 2);
    // Pieces overlap, so count the mass through the combined multiplier instead.
    auto combined = apply_space_time_multiplier(f, [&](double tau, std::size_t i) {
        const double m = modulation(Dispersion::schrodinger, tau, g.xi_squared(i));
        return psi_dyadic(1.0, m) + psi_dyadic(2.0, m) + psi_dyadic(4.0, m);
    });
    double captured = 0.0;
    auto fs = f.to_spectral(), cs = combined.to_spectral();
    for (std::size_t i = 0; i < fs.size(); ++i) captured += std::real(std::conj(fs[i]) * cs[i]);
    captured *= g.volume() * w.length;
    CHECK(captured / total >= 0.99);
    CHECK(low > 0.0);
}

TEST_CASE("time-constant field sits on its modulation shell") {
    const Grid g(2, 16, 2.0 * M_PI);
    const TimeWindow w{0.0, 2.0 * M_PI, 16};
    auto u0 = SpectralField::plane_wave(g, {2, 1, 0});
    auto f = SpaceTimeField::sample(g, w, [&](double) { return u0; });
    const double m = 5.0;  // tau = 0, |xi|^2 = 5
    for (double L : dyadic_levels(max_modulation(g, w, Dispersion::schrodinger))) {
        const double mass = modulation_project(f, L, Dispersion::schrodinger).field.l2_norm();
        if (m <= L / 2.0 || m >= 2.0 * L) CHECK(mass < 1e-13 * f.l2_norm());
        else CHECK(mass > 0.0);
    }
}

TEST_CASE("degenerate angular splitting") {
    auto s = angular_splitting(16.0, 16.0);
    CHECK(s.fine_level == 1);
    REQUIRE(s.blocks.size() == 1);
    CHECK(s.blocks[0].near);
    CHECK_THROWS_AS(angular_splitting(16.0, 64.0), ContractViolation);
    CHECK_THROWS_AS(angular_splitting(24.0, 16.0), ContractViolation);
}

TEST_CASE("angular splitting covers every fine pair exactly once") {
    for (double N1 : {1024.0, 2048.0}) {
        for (double N2 : {N1 / 2.0, N1, 2.0 * N1}) {
            auto s = angular_splitting(N1, N2);
            const int M = s.fine_level;
            CHECK(M == static_cast<int>(N1 / 16.0));
            std::vector<int> cover(static_cast<std::size_t>(M * M), 0);
            std::set<std::tuple<int, int, int>> seen;
            for (const auto& b : s.blocks) {
                CHECK(seen.insert({b.A, b.J1, b.J2}).second);
                if (b.near) {
                    CHECK(b.A == M);
                    CHECK(sector_distance(M, b.J1, b.J2) <= 16);
                    ++cover[static_cast<std::size_t>(b.J1 * M + b.J2)];
                } else {
                    CHECK(b.A >= 64);
                    CHECK(b.A <= M);
                    const int d = sector_distance(b.A, b.J1, b.J2);
                    CHECK(d >= 17);
                    CHECK(d <= 33);
                    const int r = M / b.A;
                    for (int c1 = 0; c1 < r; ++c1)
                        for (int c2 = 0; c2 < r; ++c2) ++cover[static_cast<std::size_t>((b.J1 * r + c1) * M + b.J2 * r + c2)];
                }
            }
            CHECK(std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; }));
        }
    }
}
