#ifndef FAIRLENS_STATS_HPP_
#define FAIRLENS_STATS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairlens/outcomes.hpp"

namespace fairlens {

// --- substrate -------------------------------------------------------------

struct RankResult {
    std::vector<double> ranks;          // mid-ranks 1..N, same order as input
    std::vector<std::size_t> tie_sizes; // sizes of tie groups (>= 2 only)
};

// Ascending mid-ranks; tied values share the mean of their rank span.
// Throws InputError on empty input.
RankResult rank_with_ties(std::span<const double> values);

// Regularized upper incomplete gamma Q(df/2, x/2): the chi-square upper-tail
// probability. Series expansion below a+1, continued fraction above;
// absolute error well under 1e-12.
double chi2_upper_tail(double x, int df);

// --- tests -----------------------------------------------------------------

struct KruskalWallisResult {
    double h = 0;
    int df = 0;
    double p_value = 1;
};

// Rank-based k-sample test with tie correction. When every pooled value is
// identical the convention H = 0, p = 1 applies. Throws InputError for fewer
// than two groups or total N < 3.
KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

// Effect size for Kruskal-Wallis: H / (N - 1).
double epsilon_squared(double h, std::size_t n_total);

struct ContingencyTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<std::int64_t>> counts; // rows x cols

    std::int64_t total() const;
};

struct ChiSquareResult {
    double chi2 = 0;
    int df = 0;
    double p_value = 1;
    std::size_t rows = 0; // after dropping empty marginals
    std::size_t cols = 0;
};

// Pearson chi-square of independence; all-zero rows/columns are dropped
// first. Returns nullopt (the not-tested signal) when fewer than two rows or
// columns survive.
std::optional<ChiSquareResult> chi_square_independence(const ContingencyTable& t);

// Effect size for chi-square: sqrt(chi2 / (N * (min(r,c) - 1))).
double cramers_v(double chi2, std::int64_t n, std::size_t rows, std::size_t cols);

// --- interpretation --------------------------------------------------------

enum class EffectKind { EpsilonSquared, CramersV };
enum class Interpretation { Negligible, Small, Medium, Large, VeryLarge };

// Band convention for Cramer's V. TableBands ([0,.1) Small, [.1,.3) Medium,
// [.3,.5) Large, [.5,inf) VeryLarge) is primary; ProseAnchors reads the
// 0.1/0.3/0.5 values as lower bounds of Small/Medium/..., with values below
// 0.1 Negligible and above 0.5 VeryLarge.
enum class VConvention { TableBands, ProseAnchors };

std::string_view to_string(Interpretation i);
std::optional<Interpretation> interpretation_from_string(std::string_view s);

Interpretation interpret_effect(EffectKind kind, double value, VConvention v_convention = VConvention::TableBands);

// --- the test grid ---------------------------------------------------------

enum class OutcomeKind { Time, Redo, Deviation, Decision };
enum class SensitiveAttribute { Race, AgeGroup, Gender, Insurance, Language };
enum class TestKind { KruskalWallis, ChiSquare };

std::string_view to_string(OutcomeKind o);
std::string_view to_string(SensitiveAttribute a);
std::string_view to_string(TestKind t);
std::optional<OutcomeKind> outcome_from_string(std::string_view s);
std::optional<SensitiveAttribute> attribute_from_string(std::string_view s);

inline constexpr double kSignificanceLevel = 0.05;

// One cell of the (acuity x attribute x outcome) grid. When tested is false
// (fewer than two groups of at least min_group_n cases) only group_sizes is
// populated.
struct StatTestResult {
    OutcomeKind outcome = OutcomeKind::Time;
    SensitiveAttribute attribute = SensitiveAttribute::Race;
    int acuity = 0;
    TestKind test = TestKind::KruskalWallis;
    bool tested = false;
    std::optional<double> statistic;
    std::optional<int> df;
    std::optional<double> p_value;
    std::optional<double> effect;
    std::optional<bool> significant;
    std::optional<Interpretation> interpretation;
    std::vector<std::pair<std::string, std::size_t>> group_sizes; // all observed groups
};

struct TestOptions {
    std::size_t min_group_n = 30;
    VConvention v_convention = VConvention::TableBands;
};

// Runs the full 5 x 5 x 4 grid: Kruskal-Wallis + epsilon-squared on duration,
// waste percentage, and fitness; chi-square + Cramer's V on the decision
// contingency. Groups below min_group_n are excluded before testing.
std::vector<StatTestResult> run_attribute_tests(const std::vector<CaseOutcomes>& outcomes, const TestOptions& options = {});

// Renders a p-value the way the result tables print it: "<0.001" below that
// threshold, three decimals otherwise.
std::string format_p_value(double p);

} // namespace fairlens

#endif
