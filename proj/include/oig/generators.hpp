#pragma once

#include <set>
#include <string>
#include <vector>

#include "oig/behavior_table.hpp"
#include "oig/matching.hpp"
#include "oig/rng.hpp"

namespace oig
{
    // Seeded instance generators shared by the property suites, the search
    // harnesses, and the regression corpus.

    inline LabelSpacePtr zero_one_space(int label_count)
    {
        std::vector<std::string> labels;
        for (int i = 0; i < label_count; ++i)
            labels.push_back("y" + std::to_string(i));
        std::vector<std::vector<Rational>> loss(label_count, std::vector<Rational>(label_count, 1));
        for (int i = 0; i < label_count; ++i)
            loss[i][i] = 0;
        return LabelSpace::make(labels, loss, LossKind::zero_one);
    }

    // Integer distances drawn from [base, 2*base] with zero diagonal; the
    // two-to-one spread makes the triangle inequality automatic.
    inline LabelSpacePtr random_metric_space(Rng & rng, int label_count)
    {
        std::vector<std::string> labels;
        for (int i = 0; i < label_count; ++i)
            labels.push_back("y" + std::to_string(i));
        int base = 1 + rng.below_int(2);
        std::vector<std::vector<Rational>> loss(label_count, std::vector<Rational>(label_count, 0));
        for (int a = 0; a < label_count; ++a)
            for (int b = a + 1; b < label_count; ++b) {
                int distance = base + rng.below_int(base + 1);
                loss[a][b] = distance;
                loss[b][a] = distance;
            }
        return LabelSpace::make(labels, loss, LossKind::metric);
    }

    // Up to max_rows distinct uniformly random behaviors; at least one.
    inline BehaviorTable random_table(Rng & rng, LabelSpacePtr space, int n, int max_rows)
    {
        int target = 1 + rng.below_int(max_rows);
        std::set<std::vector<int>> seen;
        std::vector<std::vector<int>> rows;
        for (int attempt = 0; attempt < 20 * target && static_cast<int>(rows.size()) < target; ++attempt) {
            std::vector<int> row(n);
            for (int i = 0; i < n; ++i)
                row[i] = rng.below_int(space->size());
            if (seen.insert(row).second)
                rows.push_back(row);
        }
        return make_table(std::move(space), n, rows);
    }

    inline BipartiteGraph random_graph(Rng & rng, int max_left, int max_right)
    {
        BipartiteGraph graph;
        graph.left = 1 + rng.below_int(max_left);
        graph.right = 1 + rng.below_int(max_right);
        graph.edges.resize(graph.left);
        for (int l = 0; l < graph.left; ++l)
            for (int r = 0; r < graph.right; ++r)
                if (rng.chance_one_in(2))
                    graph.edges[l].push_back(r);
        return graph;
    }
}
