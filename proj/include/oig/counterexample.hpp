#pragma once

#include <string>
#include <vector>

#include "oig/behavior_table.hpp"

namespace oig
{
    // Family separating proper from improper transductive learning: m core
    // labels pairwise at distance 2, plus one cover label s_A per nonempty
    // subset A of the cores, at distance 1 from the members of A and from
    // every other cover label, distance 2 from the remaining cores. All
    // nonzero distances are 1 or 2, so the triangle inequality is automatic.
    //
    // With the full cover s_{1..m} present, the all-core cover answers every
    // hole at distance 1; without it, every label is at distance 2 from some
    // core, and the gap of exactly 2 appears at k = 1.
    struct CounterexampleSpec
    {
        int m = 3;                     // number of core labels
        bool include_full_cover = true; // whether the cover of all m cores is in the space
        int k = 1;                     // number of free positions (the table's n)
    };

    struct CounterexampleInstance
    {
        LabelSpacePtr space;
        BehaviorTable table; // all m^k core tuples, n = k
    };

    inline CounterexampleInstance generate_counterexample(const CounterexampleSpec & spec)
    {
        if (spec.m < 2 || spec.m > 5)
            throw Error("the core set size m must be between 2 and 5");
        if (spec.k < 1 || spec.k > 4)
            throw Error("the free-position count k must be between 1 and 4");

        std::vector<std::string> labels;
        for (int i = 1; i <= spec.m; ++i)
            labels.push_back("r" + std::to_string(i));

        std::vector<unsigned> cover_masks;
        const unsigned full = (1u << spec.m) - 1;
        for (unsigned mask = 1; mask <= full; ++mask) {
            if (mask == full && ! spec.include_full_cover)
                continue;
            cover_masks.push_back(mask);
            std::string name = "s{";
            bool first = true;
            for (int i = 0; i < spec.m; ++i) {
                if (! (mask >> i & 1u))
                    continue;
                if (! first)
                    name += ",";
                name += std::to_string(i + 1);
                first = false;
            }
            name += "}";
            labels.push_back(name);
        }

        const int total = static_cast<int>(labels.size());
        std::vector<std::vector<Rational>> loss(total, std::vector<Rational>(total, 0));
        auto covered = [&](int core, int cover_slot) {
            return (cover_masks[cover_slot] >> core & 1u) != 0;
        };
        for (int a = 0; a < total; ++a)
            for (int b = 0; b < total; ++b) {
                if (a == b)
                    continue;
                bool a_core = a < spec.m;
                bool b_core = b < spec.m;
                if (a_core && b_core)
                    loss[a][b] = 2;
                else if (! a_core && ! b_core)
                    loss[a][b] = 1;
                else {
                    int core = a_core ? a : b;
                    int slot = (a_core ? b : a) - spec.m;
                    loss[a][b] = covered(core, slot) ? 1 : 2;
                }
            }

        CounterexampleInstance instance;
        instance.space = LabelSpace::make(labels, loss, LossKind::metric);

        std::vector<std::vector<int>> rows;
        std::vector<int> row(spec.k, 0);
        while (true) {
            rows.push_back(row);
            int pos = spec.k - 1;
            while (pos >= 0 && row[pos] == spec.m - 1) {
                row[pos] = 0;
                --pos;
            }
            if (pos < 0)
                break;
            ++row[pos];
        }
        instance.table = make_table(instance.space, spec.k, rows);
        return instance;
    }
}
