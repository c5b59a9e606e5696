#include "gipeps/tensor.hpp"
#include "gipeps/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace gipeps {

namespace {

std::size_t product(const std::vector<std::size_t>& d)
{
    return std::accumulate(d.begin(), d.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims)
{
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;)
        s[i - 1] = s[i] * dims[i];
    return s;
}

void check_labels(const std::vector<std::string>& labels)
{
    std::unordered_set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second)
            throw LabelError("duplicate leg label '" + l + "'");
}

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

} // namespace

LabeledTensor::LabeledTensor(std::vector<std::string> labels, std::vector<std::size_t> dims)
    : labels_(std::move(labels)), dims_(std::move(dims))
{
    if (labels_.size() != dims_.size())
        throw ShapeError("label count does not match dim count");
    check_labels(labels_);
    for (auto d : dims_)
        if (d == 0)
            throw ShapeError("leg extents must be positive");
    data_.assign(product(dims_), 0.0);
}

LabeledTensor::LabeledTensor(std::vector<std::string> labels, std::vector<std::size_t> dims,
                             std::vector<double> data)
    : LabeledTensor(std::move(labels), std::move(dims))
{
    if (data.size() != data_.size())
        throw ShapeError("entry count " + std::to_string(data.size()) + " does not match extents product " +
                         std::to_string(data_.size()));
    data_ = std::move(data);
}

LabeledTensor LabeledTensor::scalar(double v)
{
    return LabeledTensor({}, {}, {v});
}

bool LabeledTensor::has(const std::string& label) const
{
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t LabeledTensor::axis(const std::string& label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw LabelError("unknown leg '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t LabeledTensor::offset(const std::vector<std::size_t>& index) const
{
    if (index.size() != dims_.size())
        throw ShapeError("index rank mismatch");
    std::size_t off = 0;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] >= dims_[i])
            throw ShapeError("index out of range on leg '" + labels_[i] + "'");
        off = off * dims_[i] + index[i];
    }
    return off;
}

double LabeledTensor::norm() const
{
    double s = 0;
    for (double v : data_)
        s += v * v;
    return std::sqrt(s);
}

bool LabeledTensor::finite() const
{
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

LabeledTensor permute(const LabeledTensor& a, const std::vector<std::string>& order)
{
    if (order.size() != a.rank())
        throw LabelError("permutation has wrong length");
    std::vector<std::size_t> perm(order.size());
    std::vector<bool> used(order.size(), false);
    for (std::size_t i = 0; i < order.size(); ++i) {
        perm[i] = a.axis(order[i]);
        if (used[perm[i]])
            throw LabelError("leg '" + order[i] + "' repeated in permutation");
        used[perm[i]] = true;
    }
    bool identity = true;
    for (std::size_t i = 0; i < perm.size(); ++i)
        identity = identity && perm[i] == i;
    if (identity)
        return a;

    std::vector<std::size_t> newDims(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        newDims[i] = a.dims()[perm[i]];
    LabeledTensor out(order, newDims);

    const auto srcStrides = strides_of(a.dims());
    std::vector<std::size_t> step(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        step[i] = srcStrides[perm[i]];

    const std::size_t n = out.size();
    const std::size_t r = perm.size();
    const double* src = a.data().data();
    double* dst = out.mutable_data().data();
    // innermost loop unrolled over the last output leg
    const std::size_t inner = newDims[r - 1];
    const std::size_t innerStep = step[r - 1];
    std::vector<std::size_t> idx(r, 0);
    std::size_t srcOff = 0;
    for (std::size_t o = 0; o < n; o += inner) {
        for (std::size_t k = 0; k < inner; ++k)
            dst[o + k] = src[srcOff + k * innerStep];
        for (std::size_t ax = r - 1; ax-- > 0;) {
            if (++idx[ax] < newDims[ax]) {
                srcOff += step[ax];
                break;
            }
            srcOff -= step[ax] * (newDims[ax] - 1);
            idx[ax] = 0;
        }
    }
    return out;
}

LabeledTensor contract(const LabeledTensor& a, const LabeledTensor& b, const LegPairs& pairs)
{
    std::vector<std::string> pa, pb;
    std::unordered_set<std::string> usedA, usedB;
    for (const auto& [la, lb] : pairs) {
        std::size_t ia = a.axis(la);
        std::size_t ib = b.axis(lb);
        if (!usedA.insert(la).second || !usedB.insert(lb).second)
            throw LabelError("leg repeated across contraction pairs");
        if (a.dims()[ia] != b.dims()[ib])
            throw ShapeError("extent mismatch contracting '" + la + "' (" + std::to_string(a.dims()[ia]) +
                             ") with '" + lb + "' (" + std::to_string(b.dims()[ib]) + ")");
        pa.push_back(la);
        pb.push_back(lb);
    }
    std::vector<std::string> freeA, freeB, outLabels, orderA, orderB;
    std::vector<std::size_t> outDims;
    std::size_t m = 1, n = 1, k = 1;
    for (std::size_t i = 0; i < a.rank(); ++i)
        if (!usedA.count(a.labels()[i])) {
            freeA.push_back(a.labels()[i]);
            outDims.push_back(a.dims()[i]);
            m *= a.dims()[i];
        }
    for (std::size_t i = 0; i < b.rank(); ++i)
        if (!usedB.count(b.labels()[i])) {
            freeB.push_back(b.labels()[i]);
            outDims.push_back(b.dims()[i]);
            n *= b.dims()[i];
        }
    for (const auto& l : pa)
        k *= a.dim(l);
    outLabels = freeA;
    outLabels.insert(outLabels.end(), freeB.begin(), freeB.end());

    orderA = freeA;
    orderA.insert(orderA.end(), pa.begin(), pa.end());
    orderB = pb;
    orderB.insert(orderB.end(), freeB.begin(), freeB.end());
    LabeledTensor at = permute(a, orderA);
    LabeledTensor bt = permute(b, orderB);

    LabeledTensor out(outLabels, outDims);
    Eigen::Map<const RowMat> A(at.data().data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
    Eigen::Map<const RowMat> B(bt.data().data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
    Eigen::Map<RowMat> C(out.mutable_data().data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    C.noalias() = A * B;
    return out;
}

LabeledTensor relabel(const LabeledTensor& a, const std::vector<std::pair<std::string, std::string>>& renames)
{
    auto labels = a.labels();
    for (const auto& [from, to] : renames)
        labels[a.axis(from)] = to;
    return LabeledTensor(labels, a.dims(), a.data());
}

std::pair<LabeledTensor, FusedLeg> fuse(const LabeledTensor& a, const std::vector<std::string>& group,
                                        const std::string& newLabel)
{
    if (group.empty())
        throw LabelError("empty fuse group");
    std::vector<std::size_t> axes;
    for (const auto& g : group)
        axes.push_back(a.axis(g));
    std::size_t first = *std::min_element(axes.begin(), axes.end());

    std::vector<std::string> order;
    std::vector<std::string> labels;
    std::vector<std::size_t> dims;
    FusedLeg leg{newLabel, group, {}};
    std::size_t fusedDim = 1;
    for (const auto& g : group) {
        leg.dims.push_back(a.dim(g));
        fusedDim *= a.dim(g);
    }
    for (std::size_t i = 0; i < a.rank(); ++i) {
        const auto& l = a.labels()[i];
        if (i == first) {
            order.insert(order.end(), group.begin(), group.end());
            labels.push_back(newLabel);
            dims.push_back(fusedDim);
        }
        if (std::find(group.begin(), group.end(), l) == group.end()) {
            order.push_back(l);
            labels.push_back(l);
            dims.push_back(a.dims()[i]);
        }
    }
    LabeledTensor p = permute(a, order);
    return {LabeledTensor(labels, dims, p.data()), leg};
}

LabeledTensor split(const LabeledTensor& a, const FusedLeg& leg)
{
    std::size_t ax = a.axis(leg.label);
    std::size_t prod = 1;
    for (auto d : leg.dims)
        prod *= d;
    if (prod != a.dims()[ax])
        throw ShapeError("split extents do not multiply to fused extent");
    std::vector<std::string> labels;
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < a.rank(); ++i) {
        if (i == ax) {
            labels.insert(labels.end(), leg.parts.begin(), leg.parts.end());
            dims.insert(dims.end(), leg.dims.begin(), leg.dims.end());
        } else {
            labels.push_back(a.labels()[i]);
            dims.push_back(a.dims()[i]);
        }
    }
    return LabeledTensor(labels, dims, a.data());
}

LabeledTensor scaled(const LabeledTensor& a, double s)
{
    auto d = a.data();
    for (auto& v : d)
        v *= s;
    return LabeledTensor(a.labels(), a.dims(), std::move(d));
}

LabeledTensor combine(double alpha, const LabeledTensor& a, double beta, const LabeledTensor& b)
{
    LabeledTensor bp = permute(b, a.labels());
    if (bp.dims() != a.dims())
        throw ShapeError("combine: extents differ");
    auto d = a.data();
    const auto& e = bp.data();
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = alpha * d[i] + beta * e[i];
    return LabeledTensor(a.labels(), a.dims(), std::move(d));
}

double inner(const LabeledTensor& a, const LabeledTensor& b)
{
    LabeledTensor bp = permute(b, a.labels());
    if (bp.dims() != a.dims())
        throw ShapeError("inner: extents differ");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a.data()[i] * bp.data()[i];
    return s;
}

double max_abs_diff(const LabeledTensor& a, const LabeledTensor& b)
{
    LabeledTensor bp = permute(b, a.labels());
    if (bp.dims() != a.dims())
        throw ShapeError("extents differ");
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - bp.data()[i]));
    return m;
}

void dump(const LabeledTensor& a, std::ostream& os)
{
    for (std::size_t i = 0; i < a.rank(); ++i)
        os << (i ? " " : "") << a.labels()[i];
    os << '\n';
    for (std::size_t i = 0; i < a.rank(); ++i)
        os << (i ? " " : "") << a.dims()[i];
    os << '\n';
    os << std::setprecision(17);
    for (std::size_t i = 0; i < a.size(); ++i)
        os << (i ? " " : "") << a.data()[i];
    os << '\n';
}

std::string dump_string(const LabeledTensor& a)
{
    std::ostringstream os;
    dump(a, os);
    return os.str();
}

LabeledTensor load_dump(std::istream& is)
{
    std::string line;
    std::vector<std::string> labels;
    std::vector<std::size_t> dims;
    std::vector<double> data;
    if (!std::getline(is, line))
        throw ShapeError("dump: missing labels line");
    {
        std::istringstream ls(line);
        std::string l;
        while (ls >> l)
            labels.push_back(l);
    }
    if (!std::getline(is, line))
        throw ShapeError("dump: missing dims line");
    {
        std::istringstream ls(line);
        std::size_t d;
        while (ls >> d)
            dims.push_back(d);
    }
    if (!std::getline(is, line))
        throw ShapeError("dump: missing entries line");
    {
        std::istringstream ls(line);
        double v;
        while (ls >> v)
            data.push_back(v);
    }
    return LabeledTensor(labels, dims, data);
}

} // namespace gipeps
