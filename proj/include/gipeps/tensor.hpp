#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gipeps {

/// Dense real tensor with named legs, row-major over the leg order.
class LabeledTensor {
public:
    LabeledTensor() = default;
    LabeledTensor(std::vector<std::string> labels, std::vector<std::size_t> dims);
    LabeledTensor(std::vector<std::string> labels, std::vector<std::size_t> dims,
                  std::vector<double> data);

    static LabeledTensor scalar(double v);

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& mutable_data() { return data_; }

    std::size_t rank() const { return labels_.size(); }
    std::size_t size() const { return data_.size(); }
    bool has(const std::string& label) const;
    std::size_t axis(const std::string& label) const;
    std::size_t dim(const std::string& label) const { return dims_[axis(label)]; }

    std::size_t offset(const std::vector<std::size_t>& index) const;
    double at(const std::vector<std::size_t>& index) const { return data_[offset(index)]; }
    double& at(const std::vector<std::size_t>& index) { return data_[offset(index)]; }

    double norm() const;
    bool finite() const;

private:
    std::vector<std::string> labels_;
    std::vector<std::size_t> dims_;
    std::vector<double> data_{};
};

using LegPairs = std::vector<std::pair<std::string, std::string>>;

LabeledTensor contract(const LabeledTensor& a, const LabeledTensor& b, const LegPairs& pairs);
LabeledTensor permute(const LabeledTensor& a, const std::vector<std::string>& order);
LabeledTensor relabel(const LabeledTensor& a, const std::vector<std::pair<std::string, std::string>>& renames);

struct FusedLeg {
    std::string label;
    std::vector<std::string> parts;
    std::vector<std::size_t> dims;
};

/// Grouped legs become one leg placed where the first group member sat.
std::pair<LabeledTensor, FusedLeg> fuse(const LabeledTensor& a, const std::vector<std::string>& group,
                                        const std::string& newLabel);
LabeledTensor split(const LabeledTensor& a, const FusedLeg& leg);

LabeledTensor scaled(const LabeledTensor& a, double s);
/// alpha*a + beta*b, legs of b matched to a by name.
LabeledTensor combine(double alpha, const LabeledTensor& a, double beta, const LabeledTensor& b);
double inner(const LabeledTensor& a, const LabeledTensor& b);
double max_abs_diff(const LabeledTensor& a, const LabeledTensor& b);

/// Text dump: labels line, dims line, entries in row-major order.
void dump(const LabeledTensor& a, std::ostream& os);
std::string dump_string(const LabeledTensor& a);
LabeledTensor load_dump(std::istream& is);

} // namespace gipeps
