#pragma once

// Littlewood-Paley shells P_N, modulation shells S_L / W_L^+-, angular
// sectors Q_j^A (D = 2) and the near/transversal angular splitting of a
// high-high product.

#include <optional>
#include <vector>

#include "kgs/cutoff.hpp"
#include "kgs/space_time.hpp"

namespace kgs {

struct PieceLabels {
    std::optional<double> N;
    std::optional<double> L;
    std::optional<int> A;
    std::optional<int> j;
};

template <class Field>
struct LocalizedPiece {
    Field field;
    PieceLabels labels;
};

/// beta_j(s) = psi(s - j) / sum_k psi(s - k).
double equidistant_weight(int j, double s);

/// beta_j^A(theta), periodized so the A sectors tile angles mod pi; sector j
/// and its antipode share one weight.
double angular_weight(int A, int j, double theta);

/// Theta_j^A: angles within 2 pi / A of pi j / A modulo pi.
bool in_sector_support(int A, int j, double theta);

/// Dyadic levels 1, 2, 4, ... needed for sum_N psi_N = 1 up to radius r_max.
std::vector<double> dyadic_levels(double r_max);

double max_frequency(const Grid& grid);
double max_modulation(const Grid& grid, const TimeWindow& window, Dispersion kind);

LocalizedPiece<SpectralField> frequency_project(const SpectralField& f, double N);
LocalizedPiece<SpaceTimeField> frequency_project(const SpaceTimeField& f, double N);

LocalizedPiece<SpaceTimeField> modulation_project(const SpaceTimeField& f, double L, Dispersion kind);

/// Fourier symbol of Q_j^A at a spatial index. Indices on a Nyquist plane use
/// the average with their Hermitian partner so real fields stay real.
double angular_symbol(const Grid& grid, std::size_t linear, int A, int j);

LocalizedPiece<SpectralField> angular_project(const SpectralField& f, int A, int j);
LocalizedPiece<SpaceTimeField> angular_project(const SpaceTimeField& f, int A, int j);

/// Distance between sectors J1, J2 among A sectors tiling angles mod pi.
int sector_distance(int A, int J1, int J2);

/// One block of the angular splitting: fine sectors j1 of the first factor
/// paired with fine sectors j2 of the second, all at the finest level M.
struct AngularBlock {
    int A;   // level at which the block is formed (A = M for near-parallel blocks)
    int J1;  // parent sector of the first factor at level A
    int J2;
    bool near;
};

/// Fine level M = max(1, N1 / 16) and the exact cover of all fine pairs
/// (j1, j2): near-parallel pairs with distance <= 16 at level M, every other
/// pair grouped at the coarsest level A where the parents are still more
/// than 16 apart.
struct AngularSplitting {
    int fine_level;
    std::vector<AngularBlock> blocks;
};

AngularSplitting angular_splitting(double N1, double N2);

/// Symbol of the union of the fine sectors below parent J at level A.
double block_symbol(const Grid& grid, std::size_t linear, int fine_level, int A, int J);

/// Sector pieces of both factors and the index pairs (first, second) whose
/// products sum to the full product. Near-parallel terms pair a fine sector of
/// the first factor with the union of its near partners in the second.
struct HHLPieces {
    AngularSplitting splitting;
    std::vector<LocalizedPiece<SpaceTimeField>> first;
    std::vector<LocalizedPiece<SpaceTimeField>> second;
    std::vector<std::pair<std::size_t, std::size_t>> terms;
};

/// Frequency levels N1, N2 label the inputs; throws ContractViolation when
/// they are not comparable (ratio above 2).
HHLPieces decompose_hhl(const SpaceTimeField& u1, double N1, const SpaceTimeField& u2, double N2);

}  // namespace kgs
