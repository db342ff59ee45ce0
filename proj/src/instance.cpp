#include "bregman/instance.hpp"

#include "bregman/errors.hpp"
#include "bregman/rng.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace bregman {

namespace {

using nlohmann::json;

// Every generated problem has to satisfy the relative-smoothness sandwich
//   l(x|y) <= F(x) <= l(x|y) + L * D_h(x, y)
// before it is handed to a solver. The check draws its pairs from a
// stream derived from (but distinct from) the instance seed, so it does
// not disturb the generator's output.
void validate_sandwich(const CompositeProblem& p, std::uint64_t seed, int pairs) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const Eigen::Index n = p.dim();
    auto draw = [&]() {
        Vector v(n);
        if (p.set == FeasibleSet::Simplex) {
            for (Eigen::Index i = 0; i < n; ++i) v[i] = -std::log(rng.uniform_pos());
            v /= v.sum();
        } else {
            for (Eigen::Index i = 0; i < n; ++i) v[i] = 0.05 + 1.95 * rng.uniform();
        }
        return v;
    };
    const double L = p.L();
    for (int t = 0; t < pairs; ++t) {
        Vector x = draw(), y = draw();
        const double Fx = p.objective_value(x);
        const double lower = p.smooth_value(y) +
                             p.smooth_gradient(y).dot(x - y) + p.reg.value(x);
        const double upper = lower + L * p.kernel.divergence(x, y);
        const double slack = 1e-10 * std::max(1.0, std::abs(Fx));
        if (Fx < lower - slack || Fx > upper + slack) {
            std::ostringstream os;
            os << "generated instance fails the relative-smoothness sandwich "
                  "(pair "
               << t << ": lower " << lower << ", F " << Fx << ", upper " << upper
               << ")";
            throw InternalError(os.str());
        }
    }
}

Matrix uniform_matrix(Rng& rng, long m, long n) {
    Matrix A(m, n);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < m; ++i) A(i, j) = rng.uniform();
    return A;
}

Vector positive_uniform_vector(Rng& rng, long m) {
    Vector b(m);
    for (long i = 0; i < m; ++i) {
        double v = rng.uniform();
        while (v == 0.0) v = rng.uniform(); // b must be strictly positive
        b[i] = v;
    }
    return b;
}

void require_dims(long m, long n, const char* who) {
    if (m <= 0 || n <= 0) {
        std::ostringstream os;
        os << who << ": dimensions must be positive, got m = " << m
           << ", n = " << n;
        throw ConfigError(os.str());
    }
}

json matrix_to_json(const Matrix& A) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < A.cols(); ++j) row.push_back(A(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& rows, const char* name) {
    if (!rows.is_array() || rows.empty())
        throw ParseError(std::string("instance file: ") + name +
                         " must be a nonempty array of rows");
    const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index n = static_cast<Eigen::Index>(rows[0].size());
    Matrix A(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n)
            throw ParseError(std::string("instance file: ragged rows in ") + name);
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) = rows[i][j].get<double>();
    }
    return A;
}

Vector vector_from_json(const json& arr, const char* name) {
    if (!arr.is_array())
        throw ParseError(std::string("instance file: ") + name +
                         " must be an array");
    Vector v(static_cast<Eigen::Index>(arr.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = arr[i].get<double>();
    return v;
}

} // namespace

std::string to_string(InstanceFamily family) {
    switch (family) {
    case InstanceFamily::DOptRandom: return "dopt";
    case InstanceFamily::DOptLibsvm: return "dopt-libsvm";
    case InstanceFamily::PoissonRandom: return "poisson";
    case InstanceFamily::RelEntropyRandom: return "relent";
    }
    return "?";
}

InstanceFamily instance_family_from_string(const std::string& name) {
    if (name == "dopt") return InstanceFamily::DOptRandom;
    if (name == "dopt-libsvm") return InstanceFamily::DOptLibsvm;
    if (name == "poisson") return InstanceFamily::PoissonRandom;
    if (name == "relent") return InstanceFamily::RelEntropyRandom;
    throw ConfigError("unknown instance family: " + name);
}

Instance gen_doptimal(long m, long n, std::uint64_t seed) {
    require_dims(m, n, "gen_doptimal");
    if (n < m + 1) throw ConfigError("gen_doptimal: need n >= m + 1");
    Rng rng(seed);
    Matrix V(m, n);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < m; ++i) V(i, j) = rng.normal();
    Objective obj = Objective::d_optimal(std::move(V));
    Vector x0 = Vector::Constant(n, 1.0 / static_cast<double>(n));
    Instance inst{InstanceFamily::DOptRandom,
                  m,
                  n,
                  seed,
                  {std::move(obj), Regularizer::zero(), FeasibleSet::Simplex,
                   BregmanKernel(KernelKind::BurgEntropy, n)},
                  std::move(x0),
                  {},
                  false};
    validate_sandwich(inst.problem, seed, 50);
    return inst;
}

Instance gen_poisson(long m, long n, std::uint64_t seed, Regularizer reg) {
    require_dims(m, n, "gen_poisson");
    Rng rng(seed);
    Matrix A = uniform_matrix(rng, m, n);
    Vector b = positive_uniform_vector(rng, m);
    Objective obj = Objective::poisson_kl(std::move(A), std::move(b));
    Instance inst{InstanceFamily::PoissonRandom,
                  m,
                  n,
                  seed,
                  {std::move(obj), reg, FeasibleSet::NonnegOrthant,
                   BregmanKernel(KernelKind::BurgEntropy, n)},
                  Vector::Ones(n),
                  {},
                  false};
    validate_sandwich(inst.problem, seed, 50);
    return inst;
}

Instance gen_relentropy(long m, long n, std::uint64_t seed, Regularizer reg) {
    require_dims(m, n, "gen_relentropy");
    Rng rng(seed);
    Matrix A = uniform_matrix(rng, m, n);
    Vector b = positive_uniform_vector(rng, m);
    Objective obj = Objective::rel_entropy(std::move(A), std::move(b));
    Instance inst{InstanceFamily::RelEntropyRandom,
                  m,
                  n,
                  seed,
                  {std::move(obj), reg, FeasibleSet::NonnegOrthant,
                   BregmanKernel(KernelKind::ShannonEntropy, n)},
                  Vector::Ones(n),
                  {},
                  false};
    validate_sandwich(inst.problem, seed, 50);
    return inst;
}

LibsvmData load_libsvm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("libsvm: cannot open " + path);
    struct Entry {
        long idx;
        double value;
    };
    std::vector<std::vector<Entry>> samples;
    std::vector<double> labels;
    long max_index = 0;
    std::string line;
    long lineno = 0;
    auto fail = [&](const std::string& what) -> void {
        std::ostringstream os;
        os << "libsvm: " << path << ":" << lineno << ": " << what;
        throw ParseError(os.str());
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue; // blank line
        std::size_t pos = 0;
        double label = 0.0;
        try {
            label = std::stod(tok, &pos);
        } catch (const std::exception&) {
            fail("non-numeric label '" + tok + "'");
        }
        if (pos != tok.size()) fail("non-numeric label '" + tok + "'");
        std::vector<Entry> entries;
        while (ls >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos || colon == 0 ||
                colon + 1 == tok.size())
                fail("expected idx:val, got '" + tok + "'");
            long idx = 0;
            double value = 0.0;
            try {
                idx = std::stol(tok.substr(0, colon), &pos);
                if (pos != colon) fail("non-numeric index in '" + tok + "'");
                value = std::stod(tok.substr(colon + 1), &pos);
                if (pos != tok.size() - colon - 1)
                    fail("non-numeric value in '" + tok + "'");
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception&) {
                fail("malformed feature '" + tok + "'");
            }
            if (idx < 1) fail("feature indices are 1-based");
            max_index = std::max(max_index, idx);
            entries.push_back({idx, value});
        }
        samples.push_back(std::move(entries));
        labels.push_back(label);
    }
    if (samples.empty()) throw ParseError("libsvm: " + path + " has no samples");
    LibsvmData data;
    data.features = Matrix::Zero(max_index, static_cast<Eigen::Index>(samples.size()));
    data.labels = Vector(static_cast<Eigen::Index>(labels.size()));
    for (std::size_t j = 0; j < samples.size(); ++j) {
        data.labels[static_cast<Eigen::Index>(j)] = labels[j];
        for (const Entry& e : samples[j])
            data.features(e.idx - 1, static_cast<Eigen::Index>(j)) = e.value;
    }
    return data;
}

Instance dopt_from_libsvm(const std::string& path, bool unit_normalize) {
    LibsvmData data = load_libsvm(path);
    Matrix V = std::move(data.features);
    if (unit_normalize) {
        for (Eigen::Index j = 0; j < V.cols(); ++j) {
            const double nrm = V.col(j).norm();
            if (nrm == 0.0) {
                std::ostringstream os;
                os << "dopt_from_libsvm: sample " << j + 1
                   << " is a zero vector and cannot be normalized";
                throw DomainError(os.str());
            }
            V.col(j) /= nrm;
        }
    }
    const long m = V.rows(), n = V.cols();
    Objective obj = Objective::d_optimal(std::move(V));
    Instance inst{InstanceFamily::DOptLibsvm,
                  m,
                  n,
                  0,
                  {std::move(obj), Regularizer::zero(), FeasibleSet::Simplex,
                   BregmanKernel(KernelKind::BurgEntropy, n)},
                  Vector::Constant(n, 1.0 / static_cast<double>(n)),
                  path,
                  unit_normalize};
    return inst;
}

void save_instance(const Instance& instance, const std::string& path) {
    json j;
    j["format"] = "bregman-instance-v1";
    j["family"] = to_string(instance.family);
    j["m"] = instance.m;
    j["n"] = instance.n;
    j["kernel"] = to_string(instance.problem.kernel.kind());
    j["feasible_set"] = to_string(instance.problem.set);
    j["reg"] = {{"kind", to_string(instance.problem.reg.kind)},
                {"lambda", instance.problem.reg.lambda}};
    j["L"] = instance.problem.L();
    j["x0"] = json::array();
    for (Eigen::Index i = 0; i < instance.x0.size(); ++i)
        j["x0"].push_back(instance.x0[i]);
    if (instance.family == InstanceFamily::DOptLibsvm) {
        j["source"] = instance.source_path;
        j["normalized"] = instance.normalized;
    } else {
        j["seed"] = instance.seed;
    }
    const Objective& obj = instance.problem.objective;
    if (obj.kind() == ObjectiveKind::DOptimal) {
        j["V"] = matrix_to_json(obj.matrix());
    } else {
        j["A"] = matrix_to_json(obj.matrix());
        json b = json::array();
        for (Eigen::Index i = 0; i < obj.rhs().size(); ++i)
            b.push_back(obj.rhs()[i]);
        j["b"] = std::move(b);
    }
    std::ofstream out(path);
    if (!out) throw ParseError("save_instance: cannot open " + path);
    out << j.dump(1) << "\n";
    if (!out) throw ParseError("save_instance: write failed for " + path);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_instance: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("load_instance: " + path + ": " + e.what());
    }
    if (j.value("format", "") != "bregman-instance-v1")
        throw ParseError("load_instance: " + path +
                         " is not a bregman-instance-v1 file");
    const InstanceFamily family =
        instance_family_from_string(j.at("family").get<std::string>());
    const long m = j.at("m").get<long>();
    const long n = j.at("n").get<long>();
    Regularizer reg;
    reg.kind = regularizer_kind_from_string(j.at("reg").at("kind").get<std::string>());
    reg.lambda = j.at("reg").at("lambda").get<double>();
    Vector x0 = vector_from_json(j.at("x0"), "x0");

    Objective obj = [&]() {
        switch (family) {
        case InstanceFamily::DOptRandom:
        case InstanceFamily::DOptLibsvm:
            return Objective::d_optimal(matrix_from_json(j.at("V"), "V"));
        case InstanceFamily::PoissonRandom:
            return Objective::poisson_kl(matrix_from_json(j.at("A"), "A"),
                                         vector_from_json(j.at("b"), "b"));
        case InstanceFamily::RelEntropyRandom:
            return Objective::rel_entropy(matrix_from_json(j.at("A"), "A"),
                                          vector_from_json(j.at("b"), "b"));
        }
        throw InternalError("unreachable family");
    }();
    if (obj.rows() != m || obj.dim() != n)
        throw ParseError("load_instance: header dimensions do not match payload");
    // The constant is recomputed from the payload; the stored value is
    // documentation and must agree.
    const double L_file = j.at("L").get<double>();
    if (std::abs(L_file - obj.rel_smooth_constant()) >
        1e-9 * std::max(1.0, std::abs(L_file)))
        throw ParseError("load_instance: stored L disagrees with the payload");
    const KernelKind kk = kernel_kind_from_string(j.at("kernel").get<std::string>());
    const FeasibleSet set =
        feasible_set_from_string(j.at("feasible_set").get<std::string>());
    Instance inst{family,
                  m,
                  n,
                  j.value("seed", std::uint64_t{0}),
                  {std::move(obj), reg, set, BregmanKernel(kk, n)},
                  std::move(x0),
                  j.value("source", std::string{}),
                  j.value("normalized", false)};
    if (inst.x0.size() != n)
        throw ParseError("load_instance: x0 size does not match n");
    return inst;
}

} // namespace bregman
