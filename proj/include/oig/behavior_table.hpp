#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oig/label_space.hpp"

namespace oig
{
    // A finite set of behaviors: n columns (sample positions), pairwise
    // distinct rows of label indices. Columns are positions only; repeated
    // datapoints are not modeled.
    struct BehaviorTable
    {
        LabelSpacePtr space;
        int n = 0;
        std::vector<std::vector<int>> rows;

        int row_count() const { return static_cast<int>(rows.size()); }
    };

    inline BehaviorTable make_table(LabelSpacePtr space, int n, std::vector<std::vector<int>> rows)
    {
        if (! space)
            throw Error("behavior table needs a label space");
        if (n < 1)
            throw Error("behavior table needs at least one column");
        if (rows.empty())
            throw Error("behavior table needs at least one row");

        std::set<std::vector<int>> seen;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(rows[r].size()) != n)
                throw Error("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                    " entries, expected " + std::to_string(n));
            for (int value : rows[r])
                if (value < 0 || value >= space->size())
                    throw Error("row " + std::to_string(r) + " uses label index " + std::to_string(value) +
                        ", space has " + std::to_string(space->size()) + " labels");
            if (! seen.insert(rows[r]).second)
                throw Error("row " + std::to_string(r) + " duplicates an earlier row");
        }

        return BehaviorTable{std::move(space), n, std::move(rows)};
    }

    inline BehaviorTable make_table_from_labels(
        LabelSpacePtr space, const std::vector<std::vector<std::string>> & rows)
    {
        if (! space)
            throw Error("behavior table needs a label space");
        if (rows.empty())
            throw Error("behavior table needs at least one row");
        int n = static_cast<int>(rows.front().size());
        std::vector<std::vector<int>> indexed;
        indexed.reserve(rows.size());
        for (const auto & row : rows) {
            std::vector<int> entry;
            entry.reserve(row.size());
            for (const auto & label : row)
                entry.push_back(space->index_of(label));
            indexed.push_back(std::move(entry));
        }
        return make_table(std::move(space), n, std::move(indexed));
    }

    // Labels that actually occur in the table, ascending, for the optional
    // proper-candidate restriction in the solvers.
    inline std::vector<int> table_label_set(const BehaviorTable & table)
    {
        std::set<int> used;
        for (const auto & row : table.rows)
            used.insert(row.begin(), row.end());
        return std::vector<int>(used.begin(), used.end());
    }
}
