#ifndef BREGMAN_INSTANCE_HPP
#define BREGMAN_INSTANCE_HPP

#include "bregman/problem.hpp"

#include <cstdint>
#include <string>

namespace bregman {

enum class InstanceFamily { DOptRandom, DOptLibsvm, PoissonRandom, RelEntropyRandom };

std::string to_string(InstanceFamily family);
InstanceFamily instance_family_from_string(const std::string& name);

/// A fully constructed problem instance together with its canonical start
/// point. Random instances are a pure function of (family, dims, seed):
/// the generators fill matrices column by column from a single fixed
/// stream (see Rng), so the same arguments reproduce the same instance
/// bit for bit.
struct Instance {
    InstanceFamily family;
    long m = 0;
    long n = 0;
    std::uint64_t seed = 0;
    CompositeProblem problem;
    Vector x0;
    std::string source_path; ///< LibSVM file for DOptLibsvm
    bool normalized = false; ///< LibSVM columns scaled to unit norm
};

/// D-optimal design on the simplex: V is m x n standard normal, Burg
/// kernel, Psi = 0, L = 1, x0 the simplex center. Requires n >= m + 1.
Instance gen_doptimal(long m, long n, std::uint64_t seed);

/// Poisson inverse problem on the orthant: A, b uniform(0,1) entries,
/// Burg kernel, L = ||b||_1, x0 = ones.
Instance gen_poisson(long m, long n, std::uint64_t seed, Regularizer reg);

/// Relative-entropy regression on the orthant: A, b uniform(0,1) entries,
/// Shannon kernel, L = max_j ||A_:j||_1, x0 = ones.
Instance gen_relentropy(long m, long n, std::uint64_t seed, Regularizer reg);

struct LibsvmData {
    Matrix features; ///< m x n, one column per sample; m = max feature index
    Vector labels;   ///< n
};

/// Reads LibSVM sparse text: one line per sample, `label idx:val ...`,
/// 1-based indices, missing indices zero. Throws ParseError with the line
/// number on malformed input.
LibsvmData load_libsvm(const std::string& path);

/// D-optimal instance from LibSVM samples taken as design vectors; with
/// unit_normalize each sample is scaled to unit Euclidean norm.
Instance dopt_from_libsvm(const std::string& path, bool unit_normalize = false);

/// Self-describing JSON file: a header (family, dims, seed, regularizer,
/// L, kernel, feasible set) plus the matrix payload as nested arrays in
/// shortest round-trip decimal form, so save/load round-trips bit-exactly.
void save_instance(const Instance& instance, const std::string& path);
Instance load_instance(const std::string& path);

} // namespace bregman

#endif
