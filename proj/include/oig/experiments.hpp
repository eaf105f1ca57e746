#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oig/agnostic.hpp"
#include "oig/counterexample.hpp"
#include "oig/generators.hpp"
#include "oig/matching.hpp"
#include "oig/minimax.hpp"

namespace oig
{
    namespace detail
    {
        // Exact optimum of a table: the matching solver for zero-one losses,
        // exhaustive search otherwise.
        inline Rational exact_value(const BehaviorTable & table, const SolveOptions & options)
        {
            auto problem = build_problem(table);
            if (table.space->kind() == LossKind::zero_one)
                return optimal_zero_one(problem).epsilon;
            return brute_force_minimax(problem, options).value;
        }

        inline std::vector<std::vector<int>> dedup_rows(const std::vector<std::vector<int>> & rows)
        {
            std::set<std::vector<int>> seen;
            std::vector<std::vector<int>> kept;
            for (const auto & row : rows)
                if (seen.insert(row).second)
                    kept.push_back(row);
            return kept;
        }
    }

    // ------------------------------------------------------------------
    // Compactness sweep: within each column subset, the optimum of the full
    // (deduplicated) projection must equal the max over its row subsets.
    // ------------------------------------------------------------------

    struct SweepCell
    {
        std::vector<int> columns;
        Rational full_xi;       // all projected rows
        Rational max_subset_xi; // over row subsets including the full set
        Rational proper_max_xi; // over proper row subsets only (0 when none solved)
        Rational ratio;         // max_subset_xi / full_xi, 1 when full_xi = 0
        int projected_rows = 0;
        int solves = 0;
        bool complete = true;   // false when the budget cut the subset enumeration short
    };

    struct SweepReport
    {
        LossKind kind = LossKind::zero_one;
        Rational headline_full_xi; // full table, all columns
        Rational headline_ratio;
        std::vector<SweepCell> cells;
        std::uint64_t solves = 0;
        bool truncated = false;
        bool monotone_ok = true;
        std::string solver;
    };

    struct SweepOptions
    {
        // Budget on row-subset solves. Every cell's full projection is always
        // solved so the cells and the headline stay meaningful; only the
        // subset enumeration inside a cell is cut when the budget runs out.
        std::uint64_t max_solves = 200'000;
        SolveOptions solve;
    };

    inline SweepReport compactness_sweep(const BehaviorTable & table, const SweepOptions & options = {})
    {
        const int n = table.n;
        if (n > 16)
            throw Error("sweep supports at most 16 columns");

        SweepReport report;
        report.kind = table.space->kind();
        report.solver = report.kind == LossKind::zero_one ? "matching" : "brute";

        std::vector<unsigned> masks;
        for (unsigned mask = 1; mask < (1u << n); ++mask)
            masks.push_back(mask);
        std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
            return std::pair(__builtin_popcount(a), a) < std::pair(__builtin_popcount(b), b);
        });

        std::uint64_t subset_solves = 0;
        for (unsigned mask : masks) {
            SweepCell cell;
            for (int c = 0; c < n; ++c)
                if (mask >> c & 1u)
                    cell.columns.push_back(c);
            const int width = static_cast<int>(cell.columns.size());

            std::vector<std::vector<int>> projected;
            for (const auto & row : table.rows) {
                std::vector<int> slice(width);
                for (int j = 0; j < width; ++j)
                    slice[j] = row[cell.columns[j]];
                projected.push_back(std::move(slice));
            }
            projected = detail::dedup_rows(projected);
            cell.projected_rows = static_cast<int>(projected.size());
            if (cell.projected_rows > 20)
                throw BudgetError("sweep cell has too many distinct projected rows for subset enumeration");

            cell.full_xi = detail::exact_value(make_table(table.space, width, projected), options.solve);
            ++cell.solves;
            cell.max_subset_xi = cell.full_xi;

            const unsigned row_count = static_cast<unsigned>(cell.projected_rows);
            for (unsigned row_mask = 1; row_mask + 1 < (1u << row_count); ++row_mask) {
                if (subset_solves >= options.max_solves) {
                    cell.complete = false;
                    report.truncated = true;
                    break;
                }
                std::vector<std::vector<int>> subset;
                for (unsigned r = 0; r < row_count; ++r)
                    if (row_mask >> r & 1u)
                        subset.push_back(projected[r]);
                Rational value = detail::exact_value(make_table(table.space, width, subset), options.solve);
                ++cell.solves;
                ++subset_solves;
                cell.proper_max_xi = std::max(cell.proper_max_xi, value);
                cell.max_subset_xi = std::max(cell.max_subset_xi, value);
            }

            cell.ratio = cell.full_xi == 0 ? Rational(1) : cell.max_subset_xi / cell.full_xi;
            if (report.kind == LossKind::zero_one) {
                if (cell.ratio != 1)
                    throw Error("row-subset optimum exceeded the full projection in a zero-one sweep cell");
            }
            else if (cell.ratio < 1 || cell.ratio > 2)
                throw Error("sweep cell ratio left the interval [1, 2]");
            if (cell.ratio != 1)
                report.monotone_ok = false;

            report.solves += cell.solves;
            report.cells.push_back(std::move(cell));
        }

        report.headline_full_xi = report.cells.back().full_xi;
        report.headline_ratio = report.cells.back().ratio;
        return report;
    }

    // ------------------------------------------------------------------
    // Monte Carlo bridge from transductive to expected leave-one-out error.
    // ------------------------------------------------------------------

    struct PacReport
    {
        int n = 0;
        int trials = 0;
        std::uint64_t seed = 0;
        Rational xi_n;               // worst value over all size-n column multisets
        Rational estimate;           // max over rows of the mean held-out error
        int worst_row = 0;
        double standard_error = 0.0; // of the worst row's mean
        double bound = 0.0;          // xi_n + 3 * standard_error
        bool holds = false;
        std::vector<Rational> row_means;
        std::vector<double> row_stderr;
        int distinct_multisets = 0;
    };

    namespace detail
    {
        // Error of the optimal learner for one realized sample, per class
        // row. Positions whose column repeats inside the sample are answered
        // by their twin at zero loss, so only columns drawn exactly once
        // enter the assignment problem; the divisor stays the sample size.
        inline std::vector<Rational> multiset_errors(
            const BehaviorTable & table, const std::vector<int> & sorted_columns, const SolveOptions & options)
        {
            const int draw = static_cast<int>(sorted_columns.size());
            std::vector<int> distinct;
            std::vector<int> multiplicity;
            for (int column : sorted_columns) {
                if (! distinct.empty() && distinct.back() == column)
                    ++multiplicity.back();
                else {
                    distinct.push_back(column);
                    multiplicity.push_back(1);
                }
            }
            const int width = static_cast<int>(distinct.size());

            std::vector<std::vector<int>> projected;
            std::map<std::vector<int>, int> dedup;
            std::vector<int> image(table.row_count());
            for (int r = 0; r < table.row_count(); ++r) {
                std::vector<int> slice(width);
                for (int j = 0; j < width; ++j)
                    slice[j] = table.rows[r][distinct[j]];
                auto [it, fresh] = dedup.emplace(slice, static_cast<int>(projected.size()));
                if (fresh)
                    projected.push_back(std::move(slice));
                image[r] = it->second;
            }

            auto problem = build_problem(make_table(table.space, width, projected));
            std::vector<bool> unique(width);
            for (int j = 0; j < width; ++j)
                unique[j] = multiplicity[j] == 1;
            auto solved = brute_force_masked(problem, unique, draw, options);

            const auto & space = *table.space;
            std::vector<Rational> dedup_error(projected.size(), 0);
            for (int r = 0; r < static_cast<int>(projected.size()); ++r) {
                Rational total = 0;
                for (int j = 0; j < width; ++j) {
                    if (! unique[j])
                        continue;
                    total += space.loss(projected[r][j], solved.learner.choice[problem.dependence[r][j]]);
                }
                dedup_error[r] = total / draw;
            }

            std::vector<Rational> errors(table.row_count());
            for (int r = 0; r < table.row_count(); ++r)
                errors[r] = dedup_error[image[r]];
            return errors;
        }
    }

    inline PacReport pac_bridge_check(
        const BehaviorTable & table, int n, int trials, std::uint64_t seed, const SolveOptions & options = {})
    {
        if (trials < 1)
            throw Error("need at least one trial");
        if (n < 1)
            throw Error("sample size must be positive");

        PacReport report;
        report.n = n;
        report.trials = trials;
        report.seed = seed;

        std::map<std::vector<int>, std::vector<Rational>> cache;
        auto lookup = [&](const std::vector<int> & sorted_columns) -> const std::vector<Rational> & {
            auto it = cache.find(sorted_columns);
            if (it == cache.end())
                it = cache.emplace(sorted_columns, detail::multiset_errors(table, sorted_columns, options)).first;
            return it->second;
        };

        // Exact worst case over every size-n column multiset (nondecreasing
        // index vectors), against which the Monte Carlo estimate is checked.
        {
            std::vector<int> multiset(n, 0);
            while (true) {
                const auto & errors = lookup(multiset);
                for (const auto & error : errors)
                    report.xi_n = std::max(report.xi_n, error);
                int pos = n - 1;
                while (pos >= 0 && multiset[pos] == table.n - 1)
                    --pos;
                if (pos < 0)
                    break;
                int next = multiset[pos] + 1;
                for (int j = pos; j < n; ++j)
                    multiset[j] = next;
            }
        }

        Rng rng(seed);
        std::vector<Rational> sums(table.row_count(), 0);
        std::vector<double> square_sums(table.row_count(), 0.0);
        for (int t = 0; t < trials; ++t) {
            std::vector<int> sample(n);
            for (int j = 0; j < n; ++j)
                sample[j] = rng.below_int(table.n);
            std::sort(sample.begin(), sample.end());
            const auto & errors = lookup(sample);
            for (int r = 0; r < table.row_count(); ++r) {
                sums[r] += errors[r];
                double value = rational_to_double(errors[r]);
                square_sums[r] += value * value;
            }
        }
        report.distinct_multisets = static_cast<int>(cache.size());

        report.row_means.resize(table.row_count());
        report.row_stderr.resize(table.row_count());
        for (int r = 0; r < table.row_count(); ++r) {
            report.row_means[r] = sums[r] / trials;
            double mean = rational_to_double(report.row_means[r]);
            double variance = 0.0;
            if (trials > 1)
                variance = std::max(0.0, (square_sums[r] - trials * mean * mean) / (trials - 1));
            report.row_stderr[r] = std::sqrt(variance / trials);
            if (report.row_means[r] > report.row_means[report.worst_row])
                report.worst_row = r;
        }
        report.estimate = report.row_means[report.worst_row];
        report.standard_error = report.row_stderr[report.worst_row];
        report.bound = rational_to_double(report.xi_n) + 3 * report.standard_error;
        report.holds = report.estimate <= report.xi_n ||
            rational_to_double(report.estimate) <= report.bound;
        if (! report.holds)
            throw Error("Monte Carlo estimate " + format_rational(report.estimate) +
                " exceeded the transductive bound " + format_rational(report.xi_n) + " + 3 standard errors");
        return report;
    }

    // ------------------------------------------------------------------
    // Sample-complexity curve over a scanned range of n.
    // ------------------------------------------------------------------

    using TableFamily = std::function<BehaviorTable(int)>;

    struct CurvePoint
    {
        Rational epsilon;
        int m = -1;
        bool reachable = false;
    };

    struct CurveReport
    {
        std::string family;
        int n_min = 1;
        int n_max = 1;
        std::vector<Rational> xi; // xi[i] for n = n_min + i
        std::vector<CurvePoint> points;
        std::string solver;
    };

    inline CurveReport sample_complexity_curve(
        const std::string & family_name,
        const TableFamily & family,
        const std::vector<Rational> & epsilons,
        int n_min,
        int n_max,
        const SolveOptions & options = {})
    {
        if (n_min < 1 || n_max < n_min)
            throw Error("need 1 <= n_min <= n_max");

        CurveReport report;
        report.family = family_name;
        report.n_min = n_min;
        report.n_max = n_max;

        LossKind kind = LossKind::zero_one;
        for (int n = n_min; n <= n_max; ++n) {
            auto table = family(n);
            kind = table.space->kind();
            report.xi.push_back(detail::exact_value(table, options));
        }
        report.solver = kind == LossKind::zero_one ? "matching" : "brute";

        // suffix_max[i] = sup of xi over the scanned n >= n_min + i
        std::vector<Rational> suffix_max(report.xi);
        for (int i = static_cast<int>(suffix_max.size()) - 2; i >= 0; --i)
            suffix_max[i] = std::max(suffix_max[i], suffix_max[i + 1]);

        for (const auto & epsilon : epsilons) {
            CurvePoint point;
            point.epsilon = epsilon;
            for (int i = 0; i < static_cast<int>(suffix_max.size()); ++i) {
                if (suffix_max[i] <= epsilon) {
                    point.m = n_min + i;
                    point.reachable = true;
                    break;
                }
            }
            report.points.push_back(point);
        }

        // The threshold structure forces m to be nonincreasing in epsilon.
        for (const auto & a : report.points)
            for (const auto & b : report.points) {
                if (! (a.epsilon < b.epsilon))
                    continue;
                long ma = a.reachable ? a.m : std::numeric_limits<long>::max();
                long mb = b.reachable ? b.m : std::numeric_limits<long>::max();
                if (ma < mb)
                    throw Error("sample complexity failed to be nonincreasing in epsilon");
            }
        return report;
    }

    inline BehaviorTable star_family_table(int n)
    {
        if (n < 1)
            throw Error("the star family needs n >= 1");
        auto space = zero_one_space(2);
        std::vector<std::vector<int>> rows;
        rows.push_back(std::vector<int>(n, 0));
        for (int i = 0; i < n; ++i) {
            std::vector<int> row(n, 0);
            row[i] = 1;
            rows.push_back(std::move(row));
        }
        return make_table(std::move(space), n, rows);
    }

    inline BehaviorTable single_row_family_table(int n)
    {
        if (n < 1)
            throw Error("the single-row family needs n >= 1");
        auto space = zero_one_space(2);
        return make_table(std::move(space), n, {std::vector<int>(n, 0)});
    }

    inline BehaviorTable counterexample_family_table(int n, int m, bool include_full_cover)
    {
        return generate_counterexample({m, include_full_cover, n}).table;
    }

    // ------------------------------------------------------------------
    // Search harness for agnostic-over-realizable gaps on small metric
    // instances. Reports what it finds and claims nothing beyond that.
    // ------------------------------------------------------------------

    struct GapInstance
    {
        int stream = 0; // index of the derived random stream that produced it
        int n = 0;
        int labels = 0;
        int rows = 0;
        Rational realizable;
        Rational agnostic;
        bool finite_ratio = true; // false when realizable = 0 < agnostic
        Rational ratio;           // meaningful when finite_ratio
    };

    struct GapSearchReport
    {
        std::uint64_t seed = 0;
        int instances = 0;
        std::vector<GapInstance> top; // largest ratios found, descending
        int infinite_count = 0;       // instances with realizable = 0 < agnostic
        std::string note = "search harness only; no claim is made about unexplored instances";
    };

    inline GapSearchReport agnostic_gap_search(
        int instances, std::uint64_t seed, const SolveOptions & options = {})
    {
        if (instances < 1)
            throw Error("need at least one instance");

        GapSearchReport report;
        report.seed = seed;
        report.instances = instances;
        Rng root(seed);

        std::vector<GapInstance> found;
        for (int i = 0; i < instances; ++i) {
            Rng rng = root.derive(i);
            int n = 1 + rng.below_int(2);
            int labels = 2 + rng.below_int(2);
            auto space = random_metric_space(rng, labels);
            auto table = random_table(rng, space, n, 4);

            GapInstance instance;
            instance.stream = i;
            instance.n = n;
            instance.labels = labels;
            instance.rows = table.row_count();
            instance.realizable = brute_force_minimax(build_problem(table), options).value;
            instance.agnostic = agnostic_minimax(make_agnostic(table), true, options).value;
            if (instance.realizable > 0) {
                instance.ratio = instance.agnostic / instance.realizable;
                found.push_back(instance);
            }
            else if (instance.agnostic > 0) {
                instance.finite_ratio = false;
                ++report.infinite_count;
                found.push_back(instance);
            }
        }

        std::stable_sort(found.begin(), found.end(), [](const GapInstance & a, const GapInstance & b) {
            if (a.finite_ratio != b.finite_ratio)
                return ! a.finite_ratio; // infinite gaps first
            return a.ratio > b.ratio;
        });
        if (found.size() > 5)
            found.resize(5);
        report.top = std::move(found);
        return report;
    }
}
