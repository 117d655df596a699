#include "tgi/problems.hpp"

#include <Eigen/QR>

#include <array>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "tgi/matrix_kernels.hpp"

namespace tgi {

namespace {

using Mat = Matrix<Complex>;

// Published blocks, each listed as block (k, l) -> the 2x3 entries over (i, j)
// in row-major order. Block order is (1,1) (1,2) (1,3) (2,1) (2,2) (2,3).
using BlockTable = std::array<const char*, 6>;

constexpr BlockTable kTensorD = {
    "1 -1 1  1 1 -1",  "1 0 -1  1 0 0",    "1 0 -1  1 -1 0",
    "0 0 1  -1 0 -1",  "0 -1 -1  1 -1 0",  "1 1 -1  1 0 1",
};

constexpr BlockTable kMP = {
    "1/8 1/8 5/16  5/16 -3/16 3/16",      "-1/8 -1/8 3/16  3/16 -5/16 5/16",
    "1/2 -3/2 1/2  0 0 1/2",              "3/8 -5/8 3/16  -5/16 3/16 5/16",
    "0 1 -3/4  -1/4 -1/4 -1/4",           "1/8 -7/8 1/16  -7/16 1/16 7/16",
};

constexpr BlockTable kDrazin = {
    "1/16 37/64 -123/256  19/256 23/256 151/256",
    "-1/16 19/64 -93/256  5/256 -31/256 97/256",
    "-1/8 5/32 -39/128  -1/128 -29/128 35/128",
    "1/16 9/64 -15/256  7/256 27/256 27/256",
    "1/4 -1/16 -13/64  21/64 -1/64 -1/64",
    "-7/16 5/64 -11/256  -93/256 -89/256 39/256",
};

constexpr BlockTable kCoreEP = {
    "163/1011 733/2816 -445/1726  1021/6291 779/6405 845/3233",
    "-349/2688 493/4236 -2002/9523  -412/9359 -191/1704 92/455",
    "367/3039 -120/1921 -284/2425  458/2543 -277/9589 -30/9589",
    "3/8 -5/8 3/16  -5/16 3/16 5/16",
    "0 1 -3/4  -1/4 -1/4 -1/4",
    "1/8 -7/8 1/16  -7/16 1/16 7/16",
};

constexpr BlockTable kMPD = {
    "1/16 37/64 -11/64  -15/64 -7/32 9/32",
    "-1/16 19/64 -13/64  -9/64 -9/32 7/32",
    "-1/8 5/32 -7/32  -3/32 -5/16 3/16",
    "1/16 9/64 1/64  -3/64 1/32 1/32",
    "1/4 -1/16 -1/16  3/16 -1/8 -1/8",
    "-7/16 5/64 -11/64  -15/64 -7/32 9/32",
};

constexpr BlockTable kDMP = {
    "5/32 67/128 -233/512  81/512 77/512 269/512",
    "-5/32 45/128 -199/512  -33/512 -93/512 227/512",
    "-1/8 5/32 -39/128  -1/128 -29/128 35/128",
    "-1/32 25/128 -43/512  -29/512 23/512 87/512",
    "1/4 -1/16 -13/64  21/64 1/64 1/64",
    "-11/32 3/128 -9/512  -143/512 -147/512 45/512",
};

constexpr BlockTable kMPCEP = {
    "163/1011 733/2816 -232/4067  -369/9589 -172/2173 232/3829",
    "-349/2688 493/4236 -427/2589  -225/2519 -1452/6245 257/1638",
    "367/3039 -120/1921 -253/4979  343/3014 -89/935 -181/2607",
    "411/3445 564/2833 65/1589  -55/1006 447/6343 229/9121",
    "299/2177 589/2330 -647/3241  -118/13841 -377/1265 581/5434",
    "-371/2160 150/2719 -244/3643  -559/5298 -107/1291 453/3731",
};

constexpr BlockTable kCEPMP = {
    "163/1011 733/2816 -445/1726  1021/6291 779/6405 845/3233",
    "-349/2688 623/5353 -2002/9523  -412/9359 -319/1704 92/455",
    "367/3039 -120/1921 -284/2425  458/2543 -277/9589 -30/9589",
    "411/3445 564/2833 -289/4009  301/5161 162/883 1037/7509",
    "299/2177 589/2330 -467/1038  271/1121 -191/4000 509/1425",
    "-371/2160 150/2719 -385/15718  -358/2419 -644/5137 263/3332",
};

constexpr BlockTable kCMP = {
    "5/32 67/128 -17/128  -21/128 -11/64 13/64",
    "-5/32 45/128 -31/128  -27/128 -21/64 19/64",
    "-1/8 5/32 -7/32  -3/32 -5/16 3/16",
    "-1/32 25/128 -3/128  -15/128 -1/64 7/64",
    "1/4 -1/16 -1/16  3/16 -1/8 -1/8",
    "-11/32 3/128 -17/128  -21/128 -11/64 13/64",
};

double parse_rational(std::string_view tok) {
    auto to_int = [&](std::string_view s) {
        long long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("bad rational literal '" + std::string(tok) + "'");
        return v;
    };
    const auto slash = tok.find('/');
    if (slash == std::string_view::npos) return static_cast<double>(to_int(tok));
    return static_cast<double>(to_int(tok.substr(0, slash))) / static_cast<double>(to_int(tok.substr(slash + 1)));
}

DenseTensor fixture_tensor(const BlockTable& blocks) {
    DenseTensor t(TensorShape::square({2, 3}));
    for (Index b = 0; b < 6; ++b) {
        const Index k = b / 3, l = b % 3;
        std::istringstream in(blocks[b]);
        std::string tok;
        for (Index e = 0; e < 6; ++e) {
            if (!(in >> tok)) throw ParseError("fixture block has fewer than six entries");
            t.at({e / 3, e % 3, k, l}) = parse_rational(tok);
        }
    }
    return t;
}

Index require_grid(Index n) {
    if (n < 3) throw InvalidSize("Poisson grids need n >= 3, got " + std::to_string(n));
    return n;
}

Mat tridiag(Index n, double sub, double diag, double super) {
    Mat t = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        t(i, i) = diag;
        if (i > 0) t(i, i - 1) = sub;
        if (i + 1 < n) t(i, i + 1) = super;
    }
    return t;
}

Mat shift_block(Index k) {
    Mat s = Mat::Zero(k, k);
    for (Index i = 0; i + 1 < k; ++i) s(i, i + 1) = 1.0;
    return s;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    Mat matrix(Index rows, Index cols) {
        Mat m(rows, cols);
        for (Index j = 0; j < cols; ++j) {
            for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal_(gen_), normal_(gen_));
        }
        return m;
    }

    Mat unitary(Index n) {
        Eigen::HouseholderQR<Mat> qr(matrix(n, n));
        return qr.householderQ() * Mat::Identity(n, n);
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

Mat core_nilpotent_matrix(Index n, int nil, Rng& rng, bool coupled) {
    const Index k = std::min<Index>(nil, n);
    const Index m = n - k;
    Mat block = Mat::Zero(n, n);
    if (m > 0) {
        Eigen::Matrix<double, Eigen::Dynamic, 1> s(m);
        for (Index i = 0; i < m; ++i) s(i) = rng.uniform(0.7, 1.5);
        block.topLeftCorner(m, m) = rng.unitary(m) * s.cast<Complex>().asDiagonal() * rng.unitary(m).adjoint();
        if (coupled && k > 0) block.topRightCorner(m, k) = 0.5 * rng.matrix(m, k);
    }
    if (k > 0) block.bottomRightCorner(k, k) = shift_block(k);
    const Mat q = rng.unitary(n);
    return q * block * q.adjoint();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

long long parse_int(std::string_view s, std::string_view what) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw ParseError("bad integer '" + std::string(s) + "' for " + std::string(what));
    }
    return v;
}

std::vector<Index> parse_modes(std::string_view s) {
    std::vector<Index> modes;
    if (s.empty()) return modes;
    for (auto tok : split(s, ',')) modes.push_back(static_cast<Index>(parse_int(tok, "mode extent")));
    return modes;
}

}  // namespace

FixtureBundle paper_fixture() {
    FixtureBundle f;
    f.d = fixture_tensor(kTensorD);
    const std::pair<InverseKind, const BlockTable*> tables[] = {
        {InverseKind::MP, &kMP},   {InverseKind::Drazin, &kDrazin}, {InverseKind::CoreEP, &kCoreEP},
        {InverseKind::CMP, &kCMP}, {InverseKind::MPD, &kMPD},       {InverseKind::DMP, &kDMP},
        {InverseKind::MPCEP, &kMPCEP}, {InverseKind::CEPMP, &kCEPMP}};
    for (const auto& [kind, table] : tables) {
        f.expected.emplace(kind, fixture_tensor(*table));
        const bool exact = kind == InverseKind::MP || kind == InverseKind::Drazin || kind == InverseKind::CMP ||
                           kind == InverseKind::MPD || kind == InverseKind::DMP;
        f.exactness.emplace(kind, exact ? Exactness::ExactRational : Exactness::ApproximatePrinted);
    }
    return f;
}

DenseTensor dirichlet_poisson(Index n) {
    require_grid(n);
    const Mat q = tridiag(n, -4, 24, -4);
    const Mat p = tridiag(n, -1, -2, -1);
    Mat m = Mat::Zero(n * n, n * n);
    for (Index b = 0; b < n; ++b) {
        m.block(b * n, b * n, n, n) = q;
        if (b + 1 < n) {
            m.block(b * n, (b + 1) * n, n, n) = p;
            m.block((b + 1) * n, b * n, n, n) = p;
        }
    }
    return dematricize<Complex>(m, TensorShape::square({n, n}));
}

std::string_view to_string(NilpotentBlock b) {
    switch (b) {
        case NilpotentBlock::N1: return "N1";
        case NilpotentBlock::N2: return "N2";
        case NilpotentBlock::N3: return "N3";
    }
    return "?";
}

NilpotentBlock parse_nilpotent_block(std::string_view s) {
    for (auto b : {NilpotentBlock::N1, NilpotentBlock::N2, NilpotentBlock::N3}) {
        if (s == to_string(b)) return b;
    }
    throw ParseError("unknown nilpotent block '" + std::string(s) + "' (expected N1, N2 or N3)");
}

std::vector<Index> balanced_factorization(Index n, std::size_t order) {
    if (order == 0 || n < 1) return {};
    if (order == 1) return {n};
    const auto bound = static_cast<Index>(std::floor(std::pow(static_cast<double>(n), 1.0 / order) + 1e-9));
    for (Index a = bound; a >= 2; --a) {
        if (n % a != 0) continue;
        auto rest = balanced_factorization(n / a, order - 1);
        if (rest.empty() || rest.front() < a) continue;
        rest.insert(rest.begin(), a);
        return rest;
    }
    return {};
}

DenseTensor augment_nilpotent(const DenseTensor& d, NilpotentBlock block, ShapePolicy policy) {
    require_square(d, "nilpotent augmentation");
    const Index b = static_cast<Index>(block);
    const Index n = d.shape().row_count();
    Mat m = Mat::Zero(n + b, n + b);
    m.topLeftCorner(n, n) = d.storage();
    m.bottomRightCorner(b, b) = shift_block(b);
    auto modes = balanced_factorization(n + b, d.shape().row_modes().size());
    if (modes.empty()) {
        if (policy == ShapePolicy::Strict) {
            throw FactorizationImpossible("dimension " + std::to_string(n + b) + " has no factorization into " +
                                          std::to_string(d.shape().row_modes().size()) + " modes");
        }
        modes = {n + b};
    }
    return dematricize<Complex>(m, TensorShape::square(std::move(modes)));
}

DenseTensor neumann_poisson(Index n) {
    require_grid(n);
    const Mat t = tridiag(n, -1, 0, -1);
    const Mat id = Mat::Identity(n, n);
    Mat m = Mat::Zero(n * n, n * n);
    for (Index a = 0; a < n; ++a) {
        for (Index c = 0; c < n; ++c) {
            // kron(I, T) + kron(T, I) at block (a, c)
            Mat blk = t(a, c) * id;
            if (a == c) blk += t;
            m.block(a * n, c * n, n, n) = blk;
        }
    }
    for (Index i = 0; i < n * n; ++i) m(i, i) = -m.row(i).sum();
    return dematricize<Complex>(m, TensorShape::square({n, n}));
}

std::string_view to_string(RandomKind k) {
    switch (k) {
        case RandomKind::Dense: return "dense";
        case RandomKind::Hermitian: return "hermitian";
        case RandomKind::IndexOne: return "index-one";
        case RandomKind::CoreNilpotent: return "core-nilpotent";
    }
    return "?";
}

RandomKind parse_random_kind(std::string_view s) {
    for (auto k : {RandomKind::Dense, RandomKind::Hermitian, RandomKind::IndexOne, RandomKind::CoreNilpotent}) {
        if (s == to_string(k)) return k;
    }
    throw ParseError("unknown random kind '" + std::string(s) + "'");
}

DenseTensor random_tensor(const TensorShape& shape, std::uint64_t seed, RandomKind kind, int nilpotent) {
    Rng rng(seed);
    if (kind == RandomKind::Dense) return dematricize<Complex>(rng.matrix(shape.row_count(), shape.col_count()), shape);
    if (!shape.is_square()) throw NotSquare("random kind '" + std::string(to_string(kind)) + "' needs a square shape");
    const Index n = shape.row_count();
    switch (kind) {
        case RandomKind::Hermitian: {
            const Mat a = rng.matrix(n, n);
            return dematricize<Complex>(a + a.adjoint(), shape);
        }
        case RandomKind::IndexOne: {
            const Index r = n > 1 ? (n + 1) / 2 : 1;
            for (int attempt = 0; attempt < 16; ++attempt) {
                const Mat g = rng.matrix(n, r);
                const Mat h = rng.matrix(r, n);
                const Mat m = g * h;
                if (numerical_rank(Mat(h * g)).rank != r || index_of(m) > 1) continue;
                return dematricize<Complex>(m, shape);
            }
            throw ConvergenceFailure("could not draw an index-one tensor");
        }
        case RandomKind::CoreNilpotent: {
            int nil = nilpotent;
            if (nil <= 0) nil = n > 1 ? 1 + static_cast<int>(seed % std::min<Index>(3, n - 1)) : 0;
            return dematricize<Complex>(core_nilpotent_matrix(n, nil, rng, seed % 4 != 0), shape);
        }
        default: break;
    }
    throw ModeMismatch("unhandled random kind");
}

DenseTensor random_inner_inverse(const DenseTensor& d, std::uint64_t seed) {
    Rng rng(seed);
    const Mat dm = d.storage();
    const Mat p = pinv(dm);
    const Index m = dm.rows(), n = dm.cols();
    const Mat y = p + (Mat::Identity(n, n) - p * dm) * rng.matrix(n, m) + rng.matrix(n, m) * (Mat::Identity(m, m) - dm * p);
    return dematricize<Complex>(y, d.shape().transposed());
}

DenseTensor random_outer_inverse(const DenseTensor& d, std::uint64_t seed, Index r) {
    Rng rng(seed);
    const Mat dm = d.storage();
    if (r <= 0) {
        const Index rank = std::max<Index>(1, numerical_rank(dm).rank);
        r = 1 + static_cast<Index>(seed % static_cast<std::uint64_t>(rank));
    }
    const Mat b = rng.matrix(dm.cols(), r);
    const Mat c = rng.matrix(r, dm.rows());
    return dematricize<Complex>(Mat(b * pinv(Mat(c * dm * b)) * c), d.shape().transposed());
}

DenseTensor range_rhs(const DenseTensor& d, int power, std::uint64_t seed, const std::vector<Index>& col_modes) {
    require_square(d, "range right-hand side");
    const TensorShape shape(d.shape().col_modes(), col_modes);
    Rng rng(seed);
    const auto s = dematricize<Complex>(rng.matrix(shape.row_count(), shape.col_count()), shape);
    auto b = tensor_power(d, power) * s;
    const double nb = frobenius_norm(b);
    if (nb > 0) b *= Complex(1.0 / nb);
    return b;
}

Problem make_problem(std::string_view spec) {
    const auto parts = split(spec, ':');
    const std::string_view name = parts.front();
    std::map<std::string, std::string, std::less<>> kv;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string_view::npos) throw ParseError("problem option '" + std::string(parts[i]) + "' lacks '='");
        kv.emplace(std::string(parts[i].substr(0, eq)), std::string(parts[i].substr(eq + 1)));
    }
    auto take = [&](std::string_view key, std::string fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    Problem p;
    if (name == "fixture") {
        p.d = paper_fixture().d;
        p.label = "fixture";
    } else if (name == "dirichlet") {
        const Index n = parse_int(take("n", "8"), "n");
        const std::string block = take("block", "none");
        const std::string policy = take("policy", "balanced");
        if (policy != "balanced" && policy != "strict") throw ParseError("unknown shape policy '" + policy + "'");
        p.d = dirichlet_poisson(n);
        p.label = "dirichlet:n=" + std::to_string(n);
        if (block != "none") {
            p.d = augment_nilpotent(p.d, parse_nilpotent_block(block),
                                    policy == "strict" ? ShapePolicy::Strict : ShapePolicy::Balanced);
            p.label += ":block=" + block;
        }
    } else if (name == "neumann") {
        const Index n = parse_int(take("n", "20"), "n");
        p.d = neumann_poisson(n);
        p.label = "neumann:n=" + std::to_string(n);
    } else if (name == "random") {
        const auto rows = parse_modes(take("modes", "2,3"));
        const std::string cols_s = take("cols", "");
        const auto cols = cols_s.empty() ? rows : parse_modes(cols_s);
        const auto seed = static_cast<std::uint64_t>(parse_int(take("seed", "0"), "seed"));
        const auto kind = parse_random_kind(take("kind", "dense"));
        const int nil = static_cast<int>(parse_int(take("nil", "0"), "nil"));
        p.d = random_tensor(TensorShape(rows, cols), seed, kind, nil);
        p.label = std::string(spec);
    } else {
        throw ParseError("unknown problem '" + std::string(name) + "'");
    }
    if (!kv.empty()) throw ParseError("unknown option '" + kv.begin()->first + "' for problem '" + std::string(name) + "'");
    return p;
}

}  // namespace tgi
