#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mevsim {

struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OlsSpec {
    std::vector<std::string> names;            // one per regressor column
    std::vector<std::vector<double>> columns;  // column-major regressors
    bool intercept = true;
    // day labels, one per observation; enables day fixed effects with the
    // first (lexicographic) day omitted
    std::optional<std::vector<std::string>> day_fe;
    // cluster labels, one per observation; enables cluster-robust SEs
    std::optional<std::vector<std::string>> clusters;
};

struct OlsResult {
    std::vector<std::string> names;  // regressors, then day dummies, then const
    std::vector<double> coef;
    std::vector<double> se;          // classical homoskedastic
    std::vector<double> cluster_se;  // empty unless clusters were given
    double r_squared = 0;
    int n = 0;
    int k = 0;
    int n_clusters = 0;
};

// Least squares via Householder QR. Throws RankDeficient when the design
// matrix (including dummies/intercept) is not full column rank, EmptyInput on
// zero observations. Cluster-robust variance uses the sandwich with the
// small-sample factor (G/(G-1)) * ((N-1)/(N-K)).
OlsResult ols_fit(const std::vector<double>& y, const OlsSpec& spec);

struct SummaryRow {
    std::string name;
    int n = 0;
    double mean = 0;
    double sd = 0;  // sample SD, 0 when n < 2
    double min = 0;
    double p10 = 0;
    double p50 = 0;
    double p90 = 0;
    double max = 0;
};

// Nearest-rank percentiles: the ceil(q*n)-th smallest value.
SummaryRow summarize(const std::string& name, std::vector<double> values);
std::string summary_table(const std::vector<SummaryRow>& rows);

}  // namespace mevsim
