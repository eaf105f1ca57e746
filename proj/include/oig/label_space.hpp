#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oig/error.hpp"
#include "oig/rational.hpp"

namespace oig
{
    enum class LossKind
    {
        metric,
        zero_one,
        general
    };

    inline std::string to_string(LossKind kind)
    {
        switch (kind) {
            case LossKind::metric: return "metric";
            case LossKind::zero_one: return "zero-one";
            case LossKind::general: return "general";
        }
        throw Error("unknown loss kind");
    }

    inline LossKind loss_kind_from_string(const std::string & text)
    {
        if (text == "metric")
            return LossKind::metric;
        if (text == "zero-one")
            return LossKind::zero_one;
        if (text == "general")
            return LossKind::general;
        throw Error("unknown loss kind: '" + text + "'");
    }

    // Outcome of checking a label/loss definition against the axioms of its
    // declared kind. On failure, names the first violated axiom and the
    // witnessing label indices.
    struct ValidationReport
    {
        bool ok = true;
        std::string axiom;
        std::vector<int> indices;
        std::string message;

        static ValidationReport failure(std::string axiom, std::vector<int> indices, std::string message)
        {
            return ValidationReport{false, std::move(axiom), std::move(indices), std::move(message)};
        }
    };

    inline constexpr int default_max_labels = 64;

    // Checks a raw definition: shape first, then shared axioms, then the
    // axioms specific to the declared kind. Stops at the first violation.
    inline ValidationReport validate_space_data(
        const std::vector<std::string> & labels,
        const std::vector<std::vector<Rational>> & loss,
        LossKind kind,
        int max_labels = default_max_labels)
    {
        const int k = static_cast<int>(labels.size());

        if (k == 0)
            return ValidationReport::failure("shape", {}, "label list is empty");
        if (k > max_labels)
            return ValidationReport::failure("label-cap", {},
                "space has " + std::to_string(k) + " labels, cap is " + std::to_string(max_labels));
        if (static_cast<int>(loss.size()) != k)
            return ValidationReport::failure("shape", {},
                "loss matrix has " + std::to_string(loss.size()) + " rows for " + std::to_string(k) + " labels");
        for (int i = 0; i < k; ++i)
            if (static_cast<int>(loss[i].size()) != k)
                return ValidationReport::failure("shape", {i},
                    "loss row " + std::to_string(i) + " has " + std::to_string(loss[i].size()) + " entries");

        for (int i = 0; i < k; ++i) {
            if (labels[i].empty())
                return ValidationReport::failure("label-name", {i}, "label " + std::to_string(i) + " is empty");
            for (int j = i + 1; j < k; ++j)
                if (labels[i] == labels[j])
                    return ValidationReport::failure("duplicate-label", {i, j},
                        "labels " + std::to_string(i) + " and " + std::to_string(j) + " are both '" + labels[i] + "'");
        }

        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (loss[i][j] < 0)
                    return ValidationReport::failure("nonnegativity", {i, j},
                        "loss[" + std::to_string(i) + "][" + std::to_string(j) + "] is negative");

        for (int i = 0; i < k; ++i)
            if (loss[i][i] != 0)
                return ValidationReport::failure("zero-diagonal", {i},
                    "loss[" + std::to_string(i) + "][" + std::to_string(i) + "] must be 0");

        if (kind == LossKind::zero_one) {
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    if (i != j && loss[i][j] != 1)
                        return ValidationReport::failure("zero-one-pattern", {i, j},
                            "loss[" + std::to_string(i) + "][" + std::to_string(j) + "] must be 1 off the diagonal");
        }

        if (kind == LossKind::metric) {
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    if (loss[i][j] != loss[j][i])
                        return ValidationReport::failure("symmetry", {i, j},
                            "loss[" + std::to_string(i) + "][" + std::to_string(j) + "] != loss[" +
                            std::to_string(j) + "][" + std::to_string(i) + "]");
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    if (i != j && loss[i][j] == 0)
                        return ValidationReport::failure("positivity", {i, j},
                            "distinct labels " + std::to_string(i) + ", " + std::to_string(j) + " at distance 0");
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    for (int l = 0; l < k; ++l)
                        if (loss[i][l] > loss[i][j] + loss[j][l])
                            return ValidationReport::failure("triangle", {i, j, l},
                                "loss[" + std::to_string(i) + "][" + std::to_string(l) + "] > loss[" +
                                std::to_string(i) + "][" + std::to_string(j) + "] + loss[" +
                                std::to_string(j) + "][" + std::to_string(l) + "]");
        }

        return ValidationReport{};
    }

    class LabelSpace;
    using LabelSpacePtr = std::shared_ptr<const LabelSpace>;

    // A finite label set with an exact-rational loss matrix, immutable after
    // validated construction and safe to share across threads.
    class LabelSpace
    {
    public:
        static LabelSpacePtr make(
            std::vector<std::string> labels,
            std::vector<std::vector<Rational>> loss,
            LossKind kind,
            int max_labels = default_max_labels)
        {
            auto report = validate_space_data(labels, loss, kind, max_labels);
            if (! report.ok)
                throw Error("invalid label space (" + report.axiom + "): " + report.message);
            return LabelSpacePtr(new LabelSpace(std::move(labels), std::move(loss), kind));
        }

        int size() const { return static_cast<int>(labels_.size()); }

        LossKind kind() const { return kind_; }

        const std::vector<std::string> & labels() const { return labels_; }

        const std::string & label(int i) const { return labels_.at(i); }

        const Rational & loss(int a, int b) const
        {
            return loss_.at(a).at(b);
        }

        const Rational & loss(const std::string & a, const std::string & b) const
        {
            return loss(index_of(a), index_of(b));
        }

        std::optional<int> find(const std::string & label) const
        {
            auto it = index_.find(label);
            if (it == index_.end())
                return std::nullopt;
            return it->second;
        }

        int index_of(const std::string & label) const
        {
            auto found = find(label);
            if (! found)
                throw Error("unknown label: '" + label + "'");
            return *found;
        }

        const std::vector<std::vector<Rational>> & loss_matrix() const { return loss_; }

        ValidationReport validate() const
        {
            return validate_space_data(labels_, loss_, kind_, size());
        }

    private:
        LabelSpace(std::vector<std::string> labels, std::vector<std::vector<Rational>> loss, LossKind kind) :
            labels_(std::move(labels)),
            loss_(std::move(loss)),
            kind_(kind)
        {
            for (int i = 0; i < size(); ++i)
                index_.emplace(labels_[i], i);
        }

        std::vector<std::string> labels_;
        std::vector<std::vector<Rational>> loss_;
        LossKind kind_;
        std::map<std::string, int> index_;
    };

    // Loss matrix over a common denominator, for integer arithmetic inside
    // solver loops. Guarded so that per-row sums always fit in int64.
    struct ScaledLoss
    {
        std::int64_t denominator = 1;
        int points = 0;
        std::vector<std::int64_t> cells;

        std::int64_t at(int a, int b) const
        {
            return cells[static_cast<std::size_t>(a) * points + b];
        }
    };

    inline ScaledLoss make_scaled(const LabelSpace & space)
    {
        constexpr std::int64_t scale_cap = 1'000'000'000'000; // 10^12

        const int k = space.size();
        BigInt common = 1;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                common = boost::multiprecision::lcm(common, denominator(space.loss(i, j)));
        if (common > scale_cap)
            throw Error("loss denominators too large for the exact integer fast path");

        ScaledLoss scaled;
        scaled.denominator = common.convert_to<std::int64_t>();
        scaled.points = k;
        scaled.cells.resize(static_cast<std::size_t>(k) * k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                BigInt cell = numerator(space.loss(i, j)) * (common / denominator(space.loss(i, j)));
                if (cell > scale_cap)
                    throw Error("scaled loss entry too large for the exact integer fast path");
                scaled.cells[static_cast<std::size_t>(i) * k + j] = cell.convert_to<std::int64_t>();
            }
        return scaled;
    }
}
