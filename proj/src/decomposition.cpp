#include "kgs/decomposition.hpp"

#include <algorithm>
#include <map>

namespace kgs {
namespace {

void require_dyadic(double n, const char* what) {
    if (!is_dyadic(n)) throw ContractViolation(std::string(what) + " must be a dyadic number >= 1");
}

void require_sector(int A, int j) {
    if (A < 1) throw ContractViolation("angular: sector count must be positive");
    if (j < 0 || j >= A) throw ContractViolation("angular: sector index out of range");
}

double angle(const Grid& g, std::size_t linear) {
    const auto xi = g.xi(linear);
    return std::atan2(xi[1], xi[0]);
}

int floor_mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

double equidistant_weight(int j, double s) {
    double total = 0.0;
    const int base = static_cast<int>(std::floor(s));
    for (int k = base - 2; k <= base + 3; ++k) total += psi(s - k);
    return psi(s - j) / total;
}

double angular_weight(int A, int j, double theta) {
    require_sector(A, j);
    double s = std::fmod(A * theta / M_PI, static_cast<double>(A));
    if (s < 0.0) s += A;
    double w = 0.0;
    // beta_k is supported in (k - 2, k + 2); s lies in [0, A).
    for (int m = -3; m <= 3; ++m) w += equidistant_weight(j + m * A, s);
    return w;
}

bool in_sector_support(int A, int j, double theta) {
    require_sector(A, j);
    double d = std::fmod(theta - M_PI * j / A, M_PI);
    if (d < 0.0) d += M_PI;
    d = std::min(d, M_PI - d);
    return d <= 2.0 * M_PI / A;
}

std::vector<double> dyadic_levels(double r_max) {
    std::vector<double> levels{1.0};
    while (levels.back() / 2.0 <= r_max) levels.push_back(2.0 * levels.back());
    return levels;
}

double max_frequency(const Grid& g) {
    return std::sqrt(g.dimension()) * g.wavenumber(g.points() / 2);
}

double max_modulation(const Grid& g, const TimeWindow& w, Dispersion kind) {
    const double xi = max_frequency(g);
    const double tau = 2.0 * M_PI * (w.samples / 2) / w.length;
    return tau + (kind == Dispersion::schrodinger ? xi * xi : xi);
}

LocalizedPiece<SpectralField> frequency_project(const SpectralField& f, double N) {
    require_dyadic(N, "frequency level");
    const Grid& g = f.grid();
    auto out = apply_multiplier(f, [&](std::size_t i) { return psi_dyadic(N, std::sqrt(g.xi_squared(i))); });
    return {std::move(out), {.N = N}};
}

LocalizedPiece<SpaceTimeField> frequency_project(const SpaceTimeField& f, double N) {
    require_dyadic(N, "frequency level");
    const Grid& g = f.grid();
    std::vector<double> symbol(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) symbol[i] = psi_dyadic(N, std::sqrt(g.xi_squared(i)));
    auto out = apply_space_time_multiplier(f, [&](double, std::size_t i) { return symbol[i]; });
    return {std::move(out), {.N = N}};
}

LocalizedPiece<SpaceTimeField> modulation_project(const SpaceTimeField& f, double L, Dispersion kind) {
    require_dyadic(L, "modulation level");
    const Grid& g = f.grid();
    auto out = apply_space_time_multiplier(
        f, [&](double tau, std::size_t i) { return psi_dyadic(L, modulation(kind, tau, g.xi_squared(i))); });
    return {std::move(out), {.L = L}};
}

double angular_symbol(const Grid& g, std::size_t linear, int A, int j) {
    if (g.dimension() != 2) throw UnsupportedDimension("angular decomposition is two-dimensional");
    const double w = angular_weight(A, j, angle(g, linear));
    if (!g.touches_nyquist(linear)) return w;
    return 0.5 * (w + angular_weight(A, j, angle(g, g.mirror(linear))));
}

LocalizedPiece<SpectralField> angular_project(const SpectralField& f, int A, int j) {
    require_sector(A, j);
    const Grid& g = f.grid();
    auto out = apply_multiplier(f, [&](std::size_t i) { return angular_symbol(g, i, A, j); });
    return {std::move(out), {.A = A, .j = j}};
}

LocalizedPiece<SpaceTimeField> angular_project(const SpaceTimeField& f, int A, int j) {
    require_sector(A, j);
    const Grid& g = f.grid();
    std::vector<double> symbol(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) symbol[i] = angular_symbol(g, i, A, j);
    auto out = apply_space_time_multiplier(f, [&](double, std::size_t i) { return symbol[i]; });
    return {std::move(out), {.A = A, .j = j}};
}

int sector_distance(int A, int J1, int J2) {
    const int d = floor_mod(J1 - J2, A);
    return std::min(d, A - d);
}

AngularSplitting angular_splitting(double N1, double N2) {
    require_dyadic(N1, "frequency level");
    require_dyadic(N2, "frequency level");
    if (std::max(N1, N2) > 2.0 * std::min(N1, N2))
        throw ContractViolation("angular splitting: frequency levels are not comparable");
    const int M = std::max(1, static_cast<int>(N1 / 16.0));
    AngularSplitting out{M, {}};
    for (int j1 = 0; j1 < M; ++j1)
        for (int j2 = 0; j2 < M; ++j2)
            if (sector_distance(M, j1, j2) <= 16) out.blocks.push_back({M, j1, j2, true});
    // Parents (J1, J2) at level A more than 16 apart whose own parents at A/2 are not.
    for (int A = 64; A <= M; A *= 2)
        for (int J1 = 0; J1 < A; ++J1)
            for (int J2 = 0; J2 < A; ++J2)
                if (sector_distance(A, J1, J2) > 16 && sector_distance(A / 2, J1 / 2, J2 / 2) <= 16)
                    out.blocks.push_back({A, J1, J2, false});
    return out;
}

double block_symbol(const Grid& g, std::size_t linear, int fine_level, int A, int J) {
    const int ratio = fine_level / A;
    double w = 0.0;
    for (int c = 0; c < ratio; ++c) w += angular_symbol(g, linear, fine_level, J * ratio + c);
    return w;
}

HHLPieces decompose_hhl(const SpaceTimeField& u1, double N1, const SpaceTimeField& u2, double N2) {
    if (!u1.compatible(u2)) throw ContractViolation("decompose: incompatible fields");
    HHLPieces out{angular_splitting(N1, N2), {}, {}, {}};
    const int M = out.splitting.fine_level;
    const Grid& g = u1.grid();
    if (g.dimension() != 2) throw UnsupportedDimension("angular decomposition is two-dimensional");

    // Fine sector symbols, evaluated once.
    std::vector<std::vector<double>> fine(static_cast<std::size_t>(M), std::vector<double>(g.size()));
    for (int j = 0; j < M; ++j)
        for (std::size_t i = 0; i < g.size(); ++i) fine[static_cast<std::size_t>(j)][i] = angular_symbol(g, i, M, j);
    const auto project = [&](const SpaceTimeField& f, int A, int J, const std::vector<int>& children) {
        std::vector<double> symbol(g.size(), 0.0);
        for (int c : children)
            for (std::size_t i = 0; i < g.size(); ++i) symbol[i] += fine[static_cast<std::size_t>(c)][i];
        auto field = apply_space_time_multiplier(f, [&](double, std::size_t i) { return symbol[i]; });
        return LocalizedPiece<SpaceTimeField>{std::move(field), {.N = std::nullopt, .L = std::nullopt, .A = A, .j = J}};
    };

    std::map<std::pair<int, int>, std::size_t> first_at, second_at;
    const auto first_piece = [&](int A, int J) {
        auto it = first_at.find({A, J});
        if (it != first_at.end()) return it->second;
        std::vector<int> children;
        for (int c = 0; c < M / A; ++c) children.push_back(J * (M / A) + c);
        out.first.push_back(project(u1, A, J, children));
        return first_at[{A, J}] = out.first.size() - 1;
    };
    const auto second_piece = [&](int A, int J) {
        auto it = second_at.find({A, J});
        if (it != second_at.end()) return it->second;
        std::vector<int> children;
        for (int c = 0; c < M / A; ++c) children.push_back(J * (M / A) + c);
        out.second.push_back(project(u2, A, J, children));
        return second_at[{A, J}] = out.second.size() - 1;
    };

    for (int j1 = 0; j1 < M; ++j1) {
        std::vector<int> partners;
        for (int j2 = 0; j2 < M; ++j2)
            if (sector_distance(M, j1, j2) <= 16) partners.push_back(j2);
        const std::size_t a = first_piece(M, j1);
        out.second.push_back(project(u2, M, j1, partners));
        out.terms.emplace_back(a, out.second.size() - 1);
    }
    for (const auto& b : out.splitting.blocks)
        if (!b.near) out.terms.emplace_back(first_piece(b.A, b.J1), second_piece(b.A, b.J2));
    for (auto& p : out.first) p.labels.N = N1;
    for (auto& p : out.second) p.labels.N = N2;
    return out;
}

}  // namespace kgs
