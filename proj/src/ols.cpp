#include "mevsim/ols.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace mevsim {

OlsResult ols_fit(const std::vector<double>& y, const OlsSpec& spec) {
    const int n = static_cast<int>(y.size());
    if (n == 0) throw EmptyInput("ols_fit: no observations");
    for (size_t c = 0; c < spec.columns.size(); ++c)
        if (spec.columns[c].size() != y.size())
            throw std::invalid_argument("ols_fit: column '" + spec.names[c] +
                                        "' length mismatch");
    if (spec.names.size() != spec.columns.size())
        throw std::invalid_argument("ols_fit: names/columns mismatch");
    if (spec.day_fe && spec.day_fe->size() != y.size())
        throw std::invalid_argument("ols_fit: day labels length mismatch");
    if (spec.clusters && spec.clusters->size() != y.size())
        throw std::invalid_argument("ols_fit: cluster labels length mismatch");

    OlsResult res;
    res.names = spec.names;

    std::vector<std::string> dummy_days;
    if (spec.day_fe) {
        std::set<std::string> uniq(spec.day_fe->begin(), spec.day_fe->end());
        bool first = true;  // omit the first day to avoid the dummy trap
        for (const std::string& d : uniq) {
            if (first) {
                first = false;
                continue;
            }
            dummy_days.push_back(d);
            res.names.push_back("day_" + d);
        }
    }
    if (spec.intercept) res.names.push_back("const");

    const int k = static_cast<int>(res.names.size());
    Eigen::MatrixXd X(n, k);
    Eigen::VectorXd Y(n);
    for (int i = 0; i < n; ++i) {
        Y(i) = y[static_cast<size_t>(i)];
        int j = 0;
        for (const auto& col : spec.columns) X(i, j++) = col[static_cast<size_t>(i)];
        for (const std::string& d : dummy_days)
            X(i, j++) = (*spec.day_fe)[static_cast<size_t>(i)] == d ? 1.0 : 0.0;
        if (spec.intercept) X(i, j++) = 1.0;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k)
        throw RankDeficient("ols_fit: design matrix rank " + std::to_string(qr.rank()) +
                            " < " + std::to_string(k));
    if (n <= k) throw RankDeficient("ols_fit: no residual degrees of freedom");

    Eigen::VectorXd beta = qr.solve(Y);
    Eigen::VectorXd resid = Y - X * beta;
    const double ssr = resid.squaredNorm();
    const double sigma2 = ssr / (n - k);
    Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();

    res.n = n;
    res.k = k;
    res.coef.assign(beta.data(), beta.data() + k);
    res.se.resize(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) res.se[static_cast<size_t>(j)] = std::sqrt(sigma2 * xtx_inv(j, j));

    double sst;
    if (spec.intercept) {
        const double ybar = Y.mean();
        sst = (Y.array() - ybar).square().sum();
    } else {
        sst = Y.squaredNorm();
    }
    res.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 0.0;

    if (spec.clusters) {
        std::map<std::string, std::vector<int>> groups;
        for (int i = 0; i < n; ++i) groups[(*spec.clusters)[static_cast<size_t>(i)]].push_back(i);
        const int g = static_cast<int>(groups.size());
        res.n_clusters = g;
        if (g < 2) throw std::invalid_argument("ols_fit: need at least two clusters");
        Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
        for (const auto& [label, rows] : groups) {
            (void)label;
            Eigen::VectorXd score = Eigen::VectorXd::Zero(k);
            for (int i : rows) score += X.row(i).transpose() * resid(i);
            meat += score * score.transpose();
        }
        const double adj = (static_cast<double>(g) / (g - 1)) *
                           (static_cast<double>(n - 1) / (n - k));
        Eigen::MatrixXd V = adj * xtx_inv * meat * xtx_inv;
        res.cluster_se.resize(static_cast<size_t>(k));
        for (int j = 0; j < k; ++j)
            res.cluster_se[static_cast<size_t>(j)] = std::sqrt(std::max(0.0, V(j, j)));
    }
    return res;
}

SummaryRow summarize(const std::string& name, std::vector<double> values) {
    if (values.empty()) throw EmptyInput("summarize: no values for " + name);
    SummaryRow row;
    row.name = name;
    row.n = static_cast<int>(values.size());
    double sum = 0;
    for (double v : values) sum += v;
    row.mean = sum / row.n;
    if (row.n >= 2) {
        double ss = 0;
        for (double v : values) ss += (v - row.mean) * (v - row.mean);
        row.sd = std::sqrt(ss / (row.n - 1));
    }
    std::sort(values.begin(), values.end());
    auto pct = [&](double q) {
        // nearest-rank: the ceil(q*n)-th smallest, 1-indexed
        int rank = static_cast<int>(std::ceil(q * row.n));
        rank = std::clamp(rank, 1, row.n);
        return values[static_cast<size_t>(rank - 1)];
    };
    row.min = values.front();
    row.p10 = pct(0.10);
    row.p50 = pct(0.50);
    row.p90 = pct(0.90);
    row.max = values.back();
    return row;
}

std::string summary_table(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(24) << "variable" << std::right << std::setw(8) << "n"
        << std::setw(14) << "mean" << std::setw(14) << "sd" << std::setw(14) << "min"
        << std::setw(14) << "p10" << std::setw(14) << "p50" << std::setw(14) << "p90"
        << std::setw(14) << "max" << '\n';
    out << std::setprecision(6);
    for (const SummaryRow& r : rows) {
        out << std::left << std::setw(24) << r.name << std::right << std::setw(8) << r.n
            << std::setw(14) << r.mean << std::setw(14) << r.sd << std::setw(14) << r.min
            << std::setw(14) << r.p10 << std::setw(14) << r.p50 << std::setw(14) << r.p90
            << std::setw(14) << r.max << '\n';
    }
    return out.str();
}

}  // namespace mevsim
