#pragma once

// Deterministic test problems: the worked 2x3x2x3 example, Poisson tensors and
// seeded random tensors.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tgi/ginv.hpp"
#include "tgi/tensor.hpp"

namespace tgi {

enum class Exactness { ExactRational, ApproximatePrinted };

struct FixtureBundle {
    DenseTensor d;
    std::map<InverseKind, DenseTensor> expected;
    std::map<InverseKind, Exactness> exactness;
};

/// The 2x3x2x3 example tensor with every published inverse block.
FixtureBundle paper_fixture();

/// Block-tridiagonal Dirichlet Poisson tensor over (n, n) x (n, n).
DenseTensor dirichlet_poisson(Index n);

/// Shift blocks N1, N2, N3 of sizes 3, 4 and 5.
enum class NilpotentBlock { N1 = 3, N2 = 4, N3 = 5 };

std::string_view to_string(NilpotentBlock b);
NilpotentBlock parse_nilpotent_block(std::string_view s);

enum class ShapePolicy {
    Balanced,  // re-factor the summed dimension; fall back to an order-(1,1) shape if it is prime
    Strict,    // throw FactorizationImpossible instead of falling back
};

/// Most balanced factorization of `n` into `order` factors >= 2, ascending; empty when none exists.
std::vector<Index> balanced_factorization(Index n, std::size_t order);

/// Direct sum D (+) N_b in matricized form, re-shaped as a square tensor.
DenseTensor augment_nilpotent(const DenseTensor& d, NilpotentBlock block, ShapePolicy policy = ShapePolicy::Balanced);

/// Neumann Poisson tensor over (n, n) x (n, n): the grid graph Laplacian, index 1.
DenseTensor neumann_poisson(Index n);

enum class RandomKind { Dense, Hermitian, IndexOne, CoreNilpotent };

std::string_view to_string(RandomKind k);
RandomKind parse_random_kind(std::string_view s);

/// Seeded random tensor. `nilpotent` sets the nilpotent part (and so the index)
/// of CoreNilpotent tensors; 0 picks one from the seed.
DenseTensor random_tensor(const TensorShape& shape, std::uint64_t seed, RandomKind kind = RandomKind::Dense,
                          int nilpotent = 0);

/// D^+ + (I - D^+ D) W + W' (I - D D^+) for random W, W'.
DenseTensor random_inner_inverse(const DenseTensor& d, std::uint64_t seed);

/// B pinv(C D B) C for random B (N x r) and C (r x M); r = 0 picks from the seed.
DenseTensor random_outer_inverse(const DenseTensor& d, std::uint64_t seed, Index r = 0);

/// B = D^power * S for seeded S, scaled to unit Frobenius norm. B has the column
/// modes `col_modes` (empty for a tensor over N(s) alone).
DenseTensor range_rhs(const DenseTensor& d, int power, std::uint64_t seed, const std::vector<Index>& col_modes = {});

struct Problem {
    std::string label;
    DenseTensor d;
};

/// Named generators: "fixture", "dirichlet:n=8[:block=N2][:policy=strict]",
/// "neumann:n=20", "random:modes=2,3[:cols=..][:seed=7][:kind=dense][:nil=2]".
Problem make_problem(std::string_view spec);

}  // namespace tgi
