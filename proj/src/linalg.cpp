#include "gipeps/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <random>

namespace gipeps {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Matricized {
    RowMat m;
    std::vector<std::size_t> rowDims, colDims;
};

Matricized matricize(const LabeledTensor& a, const std::vector<std::string>& rowLegs,
                     const std::vector<std::string>& colLegs)
{
    if (rowLegs.size() + colLegs.size() != a.rank())
        throw ShapeError("row and column legs must cover all legs exactly once");
    std::vector<std::string> order = rowLegs;
    order.insert(order.end(), colLegs.begin(), colLegs.end());
    LabeledTensor p = permute(a, order);
    Matricized r;
    std::size_t rows = 1, cols = 1;
    for (const auto& l : rowLegs) {
        r.rowDims.push_back(a.dim(l));
        rows *= a.dim(l);
    }
    for (const auto& l : colLegs) {
        r.colDims.push_back(a.dim(l));
        cols *= a.dim(l);
    }
    r.m = Eigen::Map<const RowMat>(p.data().data(), static_cast<Eigen::Index>(rows),
                                   static_cast<Eigen::Index>(cols));
    return r;
}

LabeledTensor from_matrix(const RowMat& m, std::vector<std::string> labels, std::vector<std::size_t> dims)
{
    std::vector<double> d(m.data(), m.data() + m.size());
    return LabeledTensor(std::move(labels), std::move(dims), std::move(d));
}

} // namespace

SvdResult truncated_svd(const LabeledTensor& a, const std::vector<std::string>& rowLegs,
                        const std::vector<std::string>& colLegs, std::size_t chi, double cutoff,
                        const std::string& bond)
{
    if (chi < 1)
        throw ShapeError("truncated_svd: chi must be at least 1");
    if (cutoff < 0)
        throw ShapeError("truncated_svd: cutoff must be non-negative");
    auto mat = matricize(a, rowLegs, colLegs);
    Eigen::JacobiSVD<RowMat> svd(mat.m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const std::size_t full = static_cast<std::size_t>(sv.size());
    double total = 0;
    for (std::size_t i = 0; i < full; ++i)
        total += sv[i] * sv[i];
    const double smax = full ? sv[0] : 0.0;
    std::size_t keep = 0;
    while (keep < full && keep < chi && sv[keep] > cutoff * smax && sv[keep] > 0)
        ++keep;
    keep = std::max<std::size_t>(keep, 1);
    keep = std::min(keep, std::max<std::size_t>(full, 1));

    SvdResult r;
    double kept = 0;
    for (std::size_t i = 0; i < keep && i < full; ++i) {
        r.S.push_back(sv[i]);
        kept += sv[i] * sv[i];
    }
    r.discardedWeight = total > 0 ? std::max(0.0, (total - kept) / total) : 0.0;

    const auto K = static_cast<Eigen::Index>(r.S.size());
    RowMat U = svd.matrixU().leftCols(K);
    RowMat V = svd.matrixV().leftCols(K).transpose();
    auto ul = rowLegs;
    ul.push_back(bond);
    auto ud = mat.rowDims;
    ud.push_back(r.S.size());
    std::vector<std::string> vl{bond};
    vl.insert(vl.end(), colLegs.begin(), colLegs.end());
    std::vector<std::size_t> vd{r.S.size()};
    vd.insert(vd.end(), mat.colDims.begin(), mat.colDims.end());
    r.U = from_matrix(U, ul, ud);
    r.V = from_matrix(V, vl, vd);
    return r;
}

std::pair<LabeledTensor, LabeledTensor> thin_qr(const LabeledTensor& a, const std::vector<std::string>& rowLegs,
                                                const std::vector<std::string>& colLegs, const std::string& bond)
{
    auto mat = matricize(a, rowLegs, colLegs);
    const auto rows = mat.m.rows(), cols = mat.m.cols();
    const auto k = std::min(rows, cols);
    Eigen::HouseholderQR<RowMat> qr(mat.m);
    RowMat Q = qr.householderQ() * RowMat::Identity(rows, k);
    RowMat R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    auto ql = rowLegs;
    ql.push_back(bond);
    auto qd = mat.rowDims;
    qd.push_back(static_cast<std::size_t>(k));
    std::vector<std::string> rl{bond};
    rl.insert(rl.end(), colLegs.begin(), colLegs.end());
    std::vector<std::size_t> rd{static_cast<std::size_t>(k)};
    rd.insert(rd.end(), mat.colDims.begin(), mat.colDims.end());
    return {from_matrix(Q, ql, qd), from_matrix(R, rl, rd)};
}

std::vector<double> symmetric_eigenvalues(const std::vector<double>& m, std::size_t n)
{
    if (m.size() != n * n)
        throw ShapeError("symmetric_eigenvalues: size mismatch");
    if (n == 0)
        return {};
    Eigen::Map<const RowMat> M(m.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(M), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

LabeledTensor random_positive(const std::vector<std::string>& labels, const std::vector<std::size_t>& dims,
                              std::uint64_t seed)
{
    LabeledTensor t(labels, dims);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : t.mutable_data())
        v = u(rng);
    return t;
}

EigResult<LabeledTensor> leading_eig(const std::function<LabeledTensor(const LabeledTensor&)>& apply,
                                     const LabeledTensor& seed, const EigOptions& opt)
{
    VecOps<LabeledTensor> ops;
    ops.apply = [&](const LabeledTensor& v) {
        LabeledTensor w = apply(v);
        if (w.labels() != v.labels())
            w = permute(w, v.labels());
        if (w.dims() != v.dims())
            throw ShapeError("leading_eig: operator changes the boundary-state shape");
        return w;
    };
    ops.dot = [](const LabeledTensor& a, const LabeledTensor& b) { return inner(a, b); };
    ops.scale = [](const LabeledTensor& a, double s) { return scaled(a, s); };
    return power_iterate(ops, seed, opt);
}

} // namespace gipeps
