#include "gipeps/transfer.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace gipeps {

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    FitResult f;
    if (x.size() != y.size()) {
        f.diagnostics.push_back("x and y lengths differ");
        return f;
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            f.diagnostics.push_back("non-finite point " + std::to_string(i) + " rejected");
            continue;
        }
        xs.push_back(x[i]);
        ys.push_back(y[i]);
    }
    const auto n = static_cast<double>(xs.size());
    f.pointCount = static_cast<int>(xs.size());
    if (xs.size() < 2) {
        f.diagnostics.push_back("fewer than two points");
        if (xs.size() == 1)
            f.intercept = ys[0];
        return f;
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0) {
        f.diagnostics.push_back("all x values coincide");
        f.intercept = my;
        return f;
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ssr += r * r;
    }
    if (syy > 0) {
        f.rSquared = 1 - ssr / syy;
    } else {
        f.rSquared = 1;
        f.diagnostics.push_back("constant data; R^2 set to 1");
    }
    return f;
}

void write_csv_header(std::ostream& os)
{
    os << "experiment,W,R_or_c,sector_label,value,residual,backend,chi,seed\n";
}

void write_csv(std::ostream& os, const std::vector<PointRecord>& points)
{
    const auto prec = os.precision();
    os << std::setprecision(17);
    for (const auto& p : points)
        os << p.experiment << ',' << p.W << ',' << p.x << ',' << p.sector << ',' << p.value << ',' << p.residual
           << ',' << p.backend << ',' << p.chi << ',' << p.seed << '\n';
    os.precision(prec);
}

} // namespace gipeps
