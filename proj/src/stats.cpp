#include "fairlens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "fairlens/errors.hpp"

namespace fairlens {

RankResult rank_with_ties(std::span<const double> values) {
    if (values.empty()) throw InputError("rank_with_ties: empty input");
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    RankResult out;
    out.ranks.resize(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j share the mean rank of the span (1-based)
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = mid;
        if (j > i) out.tie_sizes.push_back(j - i + 1);
        i = j + 1;
    }
    return out;
}

namespace {

// ln Gamma(x) for x > 0 (Lanczos, ~1e-15 relative error).
double log_gamma(double x) {
    static const double cof[14] = {57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
                                   -0.491913816097620199,   0.339946499848118887e-4, 0.465236289270485756e-4,
                                   -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
                                   0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
                                   -0.261908384015814087e-4, 0.368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (int j = 0; j < 14; ++j) ser += cof[j] / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

// Lower incomplete gamma P(a,x) by its series representation; valid x < a+1.
double gamma_p_series(double a, double x) {
    const double gln = log_gamma(a);
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 10000; ++i) {
        ++ap;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * std::numeric_limits<double>::epsilon())
            return sum * std::exp(-x + a * std::log(x) - gln);
    }
    return sum * std::exp(-x + a * std::log(x) - gln); // converged for all practical (a,x)
}

// Upper incomplete gamma Q(a,x) by Lentz continued fraction; valid x >= a+1.
double gamma_q_cf(double a, double x) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    const double gln = log_gamma(a);
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= eps) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

} // namespace

double chi2_upper_tail(double x, int df) {
    if (df < 1) throw InputError("chi2_upper_tail: df must be >= 1");
    if (x < 0) throw InputError("chi2_upper_tail: statistic must be >= 0");
    if (x == 0) return 1.0;
    const double a = static_cast<double>(df) / 2.0;
    const double xx = x / 2.0;
    double q = xx < a + 1.0 ? 1.0 - gamma_p_series(a, xx) : gamma_q_cf(a, xx);
    if (q < 0) q = 0;
    if (q > 1) q = 1;
    return q;
}

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw InputError("kruskal_wallis: needs at least two groups");
    std::size_t n_total = 0;
    for (const auto& g : groups) n_total += g.size();
    if (n_total < 3) throw InputError("kruskal_wallis: needs at least three observations");
    for (const auto& g : groups)
        if (g.empty()) throw InputError("kruskal_wallis: empty group");

    std::vector<double> pooled;
    pooled.reserve(n_total);
    for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
    const RankResult ranked = rank_with_ties(pooled);

    const double n = static_cast<double>(n_total);
    double h = 0;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double rank_sum = 0;
        for (std::size_t i = 0; i < g.size(); ++i) rank_sum += ranked.ranks[offset + i];
        h += rank_sum * rank_sum / static_cast<double>(g.size());
        offset += g.size();
    }
    h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);

    double tie_term = 0;
    for (const std::size_t t : ranked.tie_sizes) {
        const double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    const double correction = 1.0 - tie_term / (n * n * n - n);
    const bool all_identical = ranked.tie_sizes.size() == 1 && ranked.tie_sizes[0] == n_total;

    KruskalWallisResult out;
    out.df = static_cast<int>(groups.size()) - 1;
    if (all_identical || correction <= 0) {
        // every pooled value identical: no evidence of difference
        out.h = 0;
        out.p_value = 1;
        return out;
    }
    out.h = h / correction;
    if (out.h < 0) out.h = 0; // guard tiny negative rounding
    out.p_value = chi2_upper_tail(out.h, out.df);
    return out;
}

double epsilon_squared(double h, std::size_t n_total) {
    if (n_total < 2) throw InputError("epsilon_squared: needs N >= 2");
    return h / (static_cast<double>(n_total) - 1.0);
}

std::int64_t ContingencyTable::total() const {
    std::int64_t n = 0;
    for (const auto& row : counts)
        for (const auto v : row) n += v;
    return n;
}

std::optional<ChiSquareResult> chi_square_independence(const ContingencyTable& t) {
    if (t.counts.empty()) return std::nullopt;
    const std::size_t raw_cols = t.counts.front().size();
    for (const auto& row : t.counts)
        if (row.size() != raw_cols) throw InputError("chi_square_independence: ragged table");

    std::vector<std::int64_t> row_sums(t.counts.size(), 0), col_sums(raw_cols, 0);
    for (std::size_t r = 0; r < t.counts.size(); ++r) {
        for (std::size_t c = 0; c < raw_cols; ++c) {
            if (t.counts[r][c] < 0) throw InputError("chi_square_independence: negative count");
            row_sums[r] += t.counts[r][c];
            col_sums[c] += t.counts[r][c];
        }
    }
    std::vector<std::size_t> rows, cols;
    for (std::size_t r = 0; r < row_sums.size(); ++r)
        if (row_sums[r] > 0) rows.push_back(r);
    for (std::size_t c = 0; c < col_sums.size(); ++c)
        if (col_sums[c] > 0) cols.push_back(c);
    if (rows.size() < 2 || cols.size() < 2) return std::nullopt;

    double n = 0;
    for (const std::size_t r : rows) n += static_cast<double>(row_sums[r]);

    double chi2 = 0;
    for (const std::size_t r : rows) {
        for (const std::size_t c : cols) {
            const double expected = static_cast<double>(row_sums[r]) * static_cast<double>(col_sums[c]) / n;
            const double diff = static_cast<double>(t.counts[r][c]) - expected;
            chi2 += diff * diff / expected;
        }
    }
    ChiSquareResult out;
    out.chi2 = chi2;
    out.rows = rows.size();
    out.cols = cols.size();
    out.df = static_cast<int>((rows.size() - 1) * (cols.size() - 1));
    out.p_value = chi2_upper_tail(chi2, out.df);
    return out;
}

double cramers_v(double chi2, std::int64_t n, std::size_t rows, std::size_t cols) {
    if (n <= 0) throw InputError("cramers_v: N must be positive");
    const std::size_t k = std::min(rows, cols);
    if (k < 2) throw InputError("cramers_v: needs at least a 2x2 table");
    return std::sqrt(chi2 / (static_cast<double>(n) * static_cast<double>(k - 1)));
}

std::string_view to_string(Interpretation i) {
    switch (i) {
        case Interpretation::Negligible: return "Negligible";
        case Interpretation::Small: return "Small";
        case Interpretation::Medium: return "Medium";
        case Interpretation::Large: return "Large";
        case Interpretation::VeryLarge: return "VeryLarge";
    }
    return "?";
}

std::optional<Interpretation> interpretation_from_string(std::string_view s) {
    if (s == "Negligible") return Interpretation::Negligible;
    if (s == "Small") return Interpretation::Small;
    if (s == "Medium") return Interpretation::Medium;
    if (s == "Large") return Interpretation::Large;
    if (s == "VeryLarge") return Interpretation::VeryLarge;
    return std::nullopt;
}

Interpretation interpret_effect(EffectKind kind, double value, VConvention v_convention) {
    if (value < 0) throw InputError("interpret_effect: effect size must be >= 0");
    if (kind == EffectKind::EpsilonSquared) {
        if (value < 0.01) return Interpretation::Negligible;
        if (value < 0.06) return Interpretation::Small;
        if (value < 0.14) return Interpretation::Medium;
        return Interpretation::Large;
    }
    if (v_convention == VConvention::TableBands) {
        if (value < 0.1) return Interpretation::Small;
        if (value < 0.3) return Interpretation::Medium;
        if (value < 0.5) return Interpretation::Large;
        return Interpretation::VeryLarge;
    }
    // ProseAnchors: 0.1 / 0.3 / 0.5 as lower bounds of Small / Medium / ...,
    // anything past 0.5 VeryLarge.
    if (value < 0.1) return Interpretation::Negligible;
    if (value < 0.3) return Interpretation::Small;
    if (value < 0.5) return Interpretation::Medium;
    if (value == 0.5) return Interpretation::Large;
    return Interpretation::VeryLarge;
}

std::string_view to_string(OutcomeKind o) {
    switch (o) {
        case OutcomeKind::Time: return "Time";
        case OutcomeKind::Redo: return "Redo";
        case OutcomeKind::Deviation: return "Deviation";
        case OutcomeKind::Decision: return "Decision";
    }
    return "?";
}

std::string_view to_string(SensitiveAttribute a) {
    switch (a) {
        case SensitiveAttribute::Race: return "Race";
        case SensitiveAttribute::AgeGroup: return "AgeGroup";
        case SensitiveAttribute::Gender: return "Gender";
        case SensitiveAttribute::Insurance: return "Insurance";
        case SensitiveAttribute::Language: return "Language";
    }
    return "?";
}

std::string_view to_string(TestKind t) {
    return t == TestKind::KruskalWallis ? "KruskalWallis" : "ChiSquare";
}

std::optional<OutcomeKind> outcome_from_string(std::string_view s) {
    if (s == "Time") return OutcomeKind::Time;
    if (s == "Redo") return OutcomeKind::Redo;
    if (s == "Deviation") return OutcomeKind::Deviation;
    if (s == "Decision") return OutcomeKind::Decision;
    return std::nullopt;
}

std::optional<SensitiveAttribute> attribute_from_string(std::string_view s) {
    if (s == "Race") return SensitiveAttribute::Race;
    if (s == "AgeGroup") return SensitiveAttribute::AgeGroup;
    if (s == "Gender") return SensitiveAttribute::Gender;
    if (s == "Insurance") return SensitiveAttribute::Insurance;
    if (s == "Language") return SensitiveAttribute::Language;
    return std::nullopt;
}

namespace {

std::string group_label(const DemographicProfile& p, SensitiveAttribute a) {
    switch (a) {
        case SensitiveAttribute::Race: return std::string(to_string(p.race_group));
        case SensitiveAttribute::AgeGroup: return std::string(to_string(p.age_group));
        case SensitiveAttribute::Gender: return std::string(to_string(p.gender));
        case SensitiveAttribute::Insurance: return std::string(to_string(p.insurance_group));
        case SensitiveAttribute::Language: return std::string(to_string(p.language_group));
    }
    return "?";
}

double outcome_value(const CaseOutcomes& o, OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::Time: return static_cast<double>(o.duration_seconds);
        case OutcomeKind::Redo: return o.redo.waste_pct;
        case OutcomeKind::Deviation: return o.fitness;
        case OutcomeKind::Decision: return 0; // categorical, handled separately
    }
    return 0;
}

constexpr OutcomeKind kOutcomes[] = {OutcomeKind::Time, OutcomeKind::Redo, OutcomeKind::Deviation, OutcomeKind::Decision};
constexpr SensitiveAttribute kAttributes[] = {SensitiveAttribute::Race, SensitiveAttribute::AgeGroup,
                                              SensitiveAttribute::Gender, SensitiveAttribute::Insurance,
                                              SensitiveAttribute::Language};
constexpr DecisionGroup kDecisionGroups[] = {DecisionGroup::Home, DecisionGroup::Facility, DecisionGroup::Death,
                                             DecisionGroup::AgainstAdvice, DecisionGroup::Unknown};

} // namespace

std::vector<StatTestResult> run_attribute_tests(const std::vector<CaseOutcomes>& outcomes, const TestOptions& options) {
    std::vector<StatTestResult> results;
    results.reserve(100);

    for (int acuity = 1; acuity <= 5; ++acuity) {
        std::vector<const CaseOutcomes*> stratum;
        for (const auto& o : outcomes)
            if (o.acuity && *o.acuity == acuity) stratum.push_back(&o);

        for (const auto attribute : kAttributes) {
            // Stable group order: by label, cases partitioned once per attribute.
            std::map<std::string, std::vector<const CaseOutcomes*>> by_group;
            for (const auto* o : stratum) by_group[group_label(o->profile, attribute)].push_back(o);

            std::vector<std::pair<std::string, std::size_t>> sizes;
            sizes.reserve(by_group.size());
            for (const auto& [label, members] : by_group) sizes.emplace_back(label, members.size());

            std::vector<const std::vector<const CaseOutcomes*>*> eligible;
            for (const auto& [label, members] : by_group)
                if (members.size() >= options.min_group_n) eligible.push_back(&members);

            for (const auto outcome : kOutcomes) {
                StatTestResult r;
                r.outcome = outcome;
                r.attribute = attribute;
                r.acuity = acuity;
                r.test = outcome == OutcomeKind::Decision ? TestKind::ChiSquare : TestKind::KruskalWallis;
                r.group_sizes = sizes;

                if (eligible.size() < 2) {
                    results.push_back(std::move(r));
                    continue;
                }

                if (outcome == OutcomeKind::Decision) {
                    ContingencyTable table;
                    for (const auto g : kDecisionGroups) table.col_labels.emplace_back(to_string(g));
                    for (const auto* members : eligible) {
                        table.row_labels.push_back(group_label(members->front()->profile, attribute));
                        std::vector<std::int64_t> row(std::size(kDecisionGroups), 0);
                        for (const auto* o : *members) ++row[static_cast<std::size_t>(o->decision)];
                        table.counts.push_back(std::move(row));
                    }
                    const auto chi = chi_square_independence(table);
                    if (!chi) {
                        results.push_back(std::move(r));
                        continue;
                    }
                    r.tested = true;
                    r.statistic = chi->chi2;
                    r.df = chi->df;
                    r.p_value = chi->p_value;
                    r.effect = cramers_v(chi->chi2, table.total(), chi->rows, chi->cols);
                    r.interpretation = interpret_effect(EffectKind::CramersV, *r.effect, options.v_convention);
                } else {
                    std::vector<std::vector<double>> groups;
                    groups.reserve(eligible.size());
                    std::size_t n_total = 0;
                    for (const auto* members : eligible) {
                        std::vector<double> values;
                        values.reserve(members->size());
                        for (const auto* o : *members) values.push_back(outcome_value(*o, outcome));
                        n_total += values.size();
                        groups.push_back(std::move(values));
                    }
                    const auto kw = kruskal_wallis(groups);
                    r.tested = true;
                    r.statistic = kw.h;
                    r.df = kw.df;
                    r.p_value = kw.p_value;
                    r.effect = epsilon_squared(kw.h, n_total);
                    r.interpretation = interpret_effect(EffectKind::EpsilonSquared, *r.effect);
                }
                r.significant = *r.p_value < kSignificanceLevel;
                results.push_back(std::move(r));
            }
        }
    }
    return results;
}

std::string format_p_value(double p) {
    if (p < 0.001) return "<0.001";
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(3);
    out << p;
    return out.str();
}

} // namespace fairlens
