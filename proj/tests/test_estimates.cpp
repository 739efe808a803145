#include <random>

#include "doctest.h"
#include "kgs/decomposition.hpp"
#include "kgs/estimates.hpp"

using namespace kgs;

namespace {

SpaceTimeField random_space_time(const Grid& g, const TimeWindow& w, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    SpaceTimeField f(g, w, Representation::physical);
    for (auto& v : f.values()) v = complex(normal(rng), normal(rng));
    return f;
}

// exp(i k.x) for all t, as a space-time field.
SpaceTimeField stationary_mode(const Grid& g, const TimeWindow& w, std::array<int, 3> k, complex c = 1.0) {
    SpaceTimeField f(g, w, Representation::spectral);
    f[g.linear_from_modes(k)] = c;
    return f;
}

double rel(complex a, complex b) { return std::abs(a - b) / std::abs(b); }

const Grid small(2, 8, 2.0 * M_PI);
const TimeWindow short_window{0.0, 2.0, 8};

}  // namespace

TEST_CASE("trilinear form vanishes off the constraint") {
    const auto f = stationary_mode(small, short_window, {1, 0, 0});
    const auto g1 = stationary_mode(small, short_window, {0, 2, 0});
    const auto g2 = stationary_mode(small, short_window, {-1, -1, 0});
    CHECK(std::abs(trilinear_form(f, g1, g2)) == 0.0);
    const SpaceTimeField zero(small, short_window, Representation::spectral);
    CHECK(std::abs(trilinear_form(zero, g1, g2)) == 0.0);

    const auto h = stationary_mode(small, short_window, {-1, -2, 0}, {0.5, 2.0});
    CHECK(rel(trilinear_form(h, g1, stationary_mode(small, short_window, {1, 0, 0})), {0.5, 2.0}) < 1e-14);
}

TEST_CASE("trilinear form: spectral, physical and brute-force routes agree") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto f = random_space_time(small, short_window, seed);
        const auto g1 = random_space_time(small, short_window, seed + 10);
        const auto g2 = random_space_time(small, short_window, seed + 20);
        const complex spectral = trilinear_form(f, g1, g2);
        CHECK(rel(trilinear_form_physical(f, g1, g2), spectral) < 1e-10);
        CHECK(rel(trilinear_form_brute_force(f, g1, g2), spectral) < 1e-10);
    }
    const Grid g3(3, 8, 3.0);
    const TimeWindow w{0.5, 1.0, 4};
    const auto f = random_space_time(g3, w, 7), g1 = random_space_time(g3, w, 8), g2 = random_space_time(g3, w, 9);
    CHECK(rel(trilinear_form_physical(f, g1, g2), trilinear_form(f, g1, g2)) < 1e-10);
}

TEST_CASE("trilinear form rejects mismatched grids") {
    const auto f = random_space_time(small, short_window, 1);
    const auto g = random_space_time(Grid(2, 16, 2.0 * M_PI), short_window, 2);
    CHECK_THROWS_AS(trilinear_form(f, g, g), ContractViolation);
    CHECK_THROWS_AS(trilinear_form_physical(f, f, random_space_time(small, {0.0, 2.0, 16}, 3)), ContractViolation);
}

TEST_CASE("bilinear ratios on single low modes match the closed form") {
    const double s = 0.3, sigma = -0.5, b_out = -0.4, b_in = 0.45;
    const auto u = stationary_mode(small, short_window, {1, 0, 0});
    const auto n = stationary_mode(small, short_window, {0, 1, 0});
    const double vol = std::pow(2.0 * M_PI, 2) * short_window.length;
    // Time-constant modes sit at tau = 0: Schrödinger modulation |xi|^2, wave |xi|.
    const double out = std::pow(3.0, s / 2) * std::pow(1.0 + 4.0, b_out / 2);
    const double in_u = std::pow(2.0, s / 2) * std::pow(2.0, b_in / 2);
    const double in_n = std::pow(2.0, sigma / 2) * std::pow(2.0, b_in / 2);
    const double expected = out / (in_u * in_n) / std::sqrt(vol);
    CHECK(bilinear_ratio_schrodinger(u, n, s, sigma, b_out, b_in) == doctest::Approx(expected).epsilon(1e-12));

    // u1 conj(u2) at xi = (1, -1): wave modulation sqrt(2).
    const double expected_wave = std::pow(3.0, (sigma - 1.0) / 2) * std::pow(3.0, b_out / 2) /
                                 (in_u * in_u) / std::sqrt(vol);
    CHECK(bilinear_ratio_wave_output(u, n, s, sigma, b_out, b_in) ==
          doctest::Approx(expected_wave).epsilon(1e-12));
    const SpaceTimeField zero(small, short_window, Representation::spectral);
    CHECK_THROWS_AS(bilinear_ratio_schrodinger(zero, n, s, sigma, b_out, b_in), DegenerateInput);
    CHECK_THROWS_AS(bilinear_ratio_wave_output(u, zero, s, sigma, b_out, b_in), DegenerateInput);
}

TEST_CASE("ratios are scale invariant and symmetric under swap-conjugate") {
    const auto u1 = random_space_time(small, short_window, 31);
    const auto u2 = random_space_time(small, short_window, 32);
    const double s = 0.1, sigma = 0.2, b_out = -0.49, b_in = 0.49;
    const double r = bilinear_ratio_schrodinger(u1, u2, s, sigma, b_out, b_in);
    CHECK(bilinear_ratio_schrodinger(2.0 * u1, u2, s, sigma, b_out, b_in) == doctest::Approx(r).epsilon(1e-12));
    CHECK(bilinear_ratio_schrodinger(u1, complex{0.0, -3.0} * u2, s, sigma, b_out, b_in) ==
          doctest::Approx(r).epsilon(1e-12));

    const double w = bilinear_ratio_wave_output(u1, u2, s, sigma, b_out, b_in);
    CHECK(bilinear_ratio_wave_output(2.0 * u1, 0.5 * u2, s, sigma, b_out, b_in) == doctest::Approx(w).epsilon(1e-12));
    // u2 conj(u1) is the conjugate of u1 conj(u2), which trades tau + |xi| for tau - |xi|.
    RatioOptions minus;
    minus.wave = Dispersion::wave_minus;
    CHECK(bilinear_ratio_wave_output(u2, u1, s, sigma, b_out, b_in, minus) == doctest::Approx(w).epsilon(1e-12));
    CHECK(bilinear_ratio_wave_output(u1, u1, s, sigma, b_out, b_in) > 0.0);
}

TEST_CASE("wave-output ratio through duality matches the direct ratio") {
    for (std::uint64_t seed : {41u, 42u}) {
        const auto u1 = random_space_time(small, short_window, seed);
        const auto u2 = random_space_time(small, short_window, seed + 100);
        for (double sigma : {-0.5, 0.0, 0.7}) {
            const double direct = bilinear_ratio_wave_output(u1, u2, 0.0, sigma, -0.49, 0.49);
            const double dual = bilinear_ratio_wave_output_dual(u1, u2, 0.0, sigma, -0.49, 0.49);
            CHECK(std::abs(dual - direct) / direct < 1e-10);
        }
    }
}

TEST_CASE("modal fields agree with the dense layout") {
    const Grid g(2, 16, 16.0 * M_PI);
    const TimeWindow w{0.0, 8.0, 32};
    std::map<ModalField::Mode, complex> cu{{{2, 0, 0}, {1.0, 0.5}}, {{2, 1, 0}, {-0.3, 0.2}}, {{3, -1, 0}, 0.7}};
    std::map<ModalField::Mode, complex> cn{{{-4, 0, 0}, {0.2, 1.0}}, {{-4, 1, 0}, 0.4}};
    const auto u = ModalField::windowed_free(cu, 2, g.period(), w, Dispersion::schrodinger);
    const auto n = ModalField::windowed_free(cn, 2, g.period(), w, Dispersion::wave_plus);

    const SpaceTimeField du = u.to_dense(g);
    const SpaceTimeField dn = n.to_dense(g);
    const BourgainSpec su{0.5, 0.49, Dispersion::schrodinger}, sn{-0.5, 0.49, Dispersion::wave_plus};
    CHECK(bourgain_norm(u, su) == doctest::Approx(bourgain_norm(du, su)).epsilon(1e-12));
    CHECK(bourgain_norm(n, sn) == doctest::Approx(bourgain_norm(dn, sn)).epsilon(1e-12));

    SpectralField data(g, Representation::spectral);
    for (const auto& [k, c] : cu) data[g.linear_from_modes(k)] = c;
    const SpaceTimeField free = SpaceTimeField::free_solution(data, w, Dispersion::schrodinger).windowed();
    CHECK(bourgain_norm(free, su) == doctest::Approx(bourgain_norm(u, su)).epsilon(1e-12));

    const BourgainSpec out{0.0, -0.49, Dispersion::schrodinger};
    CHECK(bourgain_norm(product(u, n), out) == doctest::Approx(bourgain_norm(product(du, dn), out)).epsilon(1e-12));
    const BourgainSpec wave_out{-1.0, -0.49, Dispersion::wave_plus};
    CHECK(bourgain_norm(product(u, u, true), wave_out) ==
          doctest::Approx(bourgain_norm(product(du, du, true), wave_out)).epsilon(1e-12));

    std::map<ModalField::Mode, complex> outside{{{9, 0, 0}, 1.0}};
    CHECK_THROWS_AS(ModalField::windowed_free(outside, 2, g.period(), w, Dispersion::schrodinger).to_dense(g),
                    ContractViolation);
}

TEST_CASE("threshold scan is reproducible and worker-independent") {
    EnsembleSpec e;
    e.samples = 6;
    const std::vector<ExponentPair> pairs{{0.0, -0.5}, {-0.5, 0.0}};
    const auto a = threshold_scan(pairs, {16, 32, 64}, e, 1);
    const auto b = threshold_scan(pairs, {16, 32, 64}, e, 3);
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].sup_schrodinger == b[i].sup_schrodinger);
        CHECK(a[i].sup_wave_output == b[i].sup_wave_output);
        CHECK(a[i].growth_exponent == b[i].growth_exponent);
        CHECK(a[i].frequency.size() == 3);
        for (double v : a[i].sup_schrodinger) CHECK(v > 0.0);
    }
    e.seed += 1;
    const auto c = threshold_scan(pairs, {16, 32, 64}, e, 1);
    CHECK(c[0].sup_schrodinger != a[0].sup_schrodinger);

    const auto two = threshold_scan(pairs, {16, 32}, e);
    CHECK_FALSE(two[0].growth_exponent.has_value());
    CHECK(a[0].growth_exponent.has_value());
    CHECK_THROWS_AS(threshold_scan(pairs, {16}, e), ContractViolation);
    CHECK_THROWS_AS(threshold_scan(pairs, {16, 64, 32}, e), ContractViolation);
    CHECK_THROWS_AS(threshold_scan({}, {16, 32, 64}, e), ContractViolation);
}

TEST_CASE("HHL pieces recompose the trilinear form") {
    // A tiny torus puts |xi| ~ 2^10 on a 32-point grid.
    const double N = 1024.0;
    const Grid g(2, 32, 2.0 * M_PI * 12.0 / N);
    const TimeWindow w{0.0, 1.0, 4};
    auto localized = [&](std::uint64_t seed) {
        auto f = frequency_project(random_space_time(g, w, seed), N).field;
        return f;
    };
    const auto u1 = localized(51), u2 = localized(52), f = random_space_time(g, w, 53);
    const HHLPieces pieces = decompose_hhl(u1, N, u2, N);
    REQUIRE(pieces.splitting.fine_level == 64);
    complex sum{};
    for (const auto& [a, b] : pieces.terms) sum += trilinear_form(f, pieces.first[a].field, pieces.second[b].field);
    CHECK(rel(sum, trilinear_form(f, u1, u2)) < 1e-10);
}

TEST_CASE("second Picard term is quadratic in the data") {
    ProbeSpec p;
    p.points = 128;
    p.period = 8.0 * M_PI;
    p.t_end = 0.2;
    p.dt = 0.02;
    const ExponentPair e{-0.5, 0.0};
    const FirstOrderState d = concentrated_data(p, 4.0, e);
    CHECK(sobolev_norm(d.u, e.s) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sobolev_norm(d.n_plus, e.sigma) == doctest::Approx(1.0).epsilon(1e-10));

    const FirstOrderState one = second_order_part(d, p);
    p.amplitude = 2.0;
    const FirstOrderState two = second_order_part(concentrated_data(p, 4.0, e), p);
    for (auto [a, b] : {std::pair{&one.u, &two.u}, std::pair{&one.n_plus, &two.n_plus}}) {
        const SpectralField diff = *b - 4.0 * *a;
        CHECK(diff.l2_norm() / b->l2_norm() < 1e-10);
    }
    CHECK(one.u.l2_norm() > 0.0);
    CHECK_THROWS_AS(concentrated_data(p, 40.0, e), ContractViolation);
    CHECK_THROWS_AS(picard_c2_probe({4.0}, e, p), ContractViolation);
}
