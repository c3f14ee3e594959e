#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "sensortext/error.hpp"

namespace sensortext {

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

/// Confusion rows are gold classes, columns are predictions. Any ratio with a
/// zero denominator is reported as 0.
struct ClassificationReport {
    std::vector<std::vector<std::size_t>> confusion;
    std::vector<ClassMetrics> per_class;
    double f1_macro = 0.0;
    double precision_macro = 0.0;
    double recall_macro = 0.0;
    double accuracy = 0.0;
    std::size_t total = 0;
};

inline ClassificationReport report_from_confusion(std::vector<std::vector<std::size_t>> confusion) {
    const std::size_t c = confusion.size();
    for (const auto& row : confusion)
        if (row.size() != c) throw DomainError("confusion matrix must be square");
    ClassificationReport rep;
    rep.confusion = std::move(confusion);
    rep.per_class.resize(c);
    std::size_t correct = 0;
    auto ratio = [](double a, double b) { return b > 0.0 ? a / b : 0.0; };
    for (std::size_t i = 0; i < c; ++i) {
        std::size_t row = 0, col = 0;
        for (std::size_t j = 0; j < c; ++j) {
            row += rep.confusion[i][j];
            col += rep.confusion[j][i];
        }
        const double tp = static_cast<double>(rep.confusion[i][i]);
        auto& m = rep.per_class[i];
        m.support = row;
        m.precision = ratio(tp, static_cast<double>(col));
        m.recall = ratio(tp, static_cast<double>(row));
        m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
        correct += rep.confusion[i][i];
        rep.total += row;
        rep.f1_macro += m.f1;
        rep.precision_macro += m.precision;
        rep.recall_macro += m.recall;
    }
    if (c > 0) {
        rep.f1_macro /= static_cast<double>(c);
        rep.precision_macro /= static_cast<double>(c);
        rep.recall_macro /= static_cast<double>(c);
    }
    rep.accuracy = ratio(static_cast<double>(correct), static_cast<double>(rep.total));
    return rep;
}

inline ClassificationReport classification_report(const std::vector<std::size_t>& pred,
                                                  const std::vector<std::size_t>& gold,
                                                  std::size_t num_classes) {
    if (pred.size() != gold.size())
        throw DomainError("prediction/gold length mismatch: " + std::to_string(pred.size()) + " vs " +
                          std::to_string(gold.size()));
    std::vector<std::vector<std::size_t>> confusion(num_classes, std::vector<std::size_t>(num_classes, 0));
    for (std::size_t k = 0; k < pred.size(); ++k) {
        if (pred[k] >= num_classes || gold[k] >= num_classes)
            throw RangeError("label index out of range at position " + std::to_string(k));
        ++confusion[gold[k]][pred[k]];
    }
    return report_from_confusion(std::move(confusion));
}

inline nlohmann::json to_json(const ClassificationReport& r, const std::vector<std::string>& labels = {}) {
    nlohmann::json per = nlohmann::json::array();
    for (std::size_t i = 0; i < r.per_class.size(); ++i) {
        const auto& m = r.per_class[i];
        nlohmann::json row = {{"class", i}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
                              {"support", m.support}};
        if (i < labels.size()) row["label"] = labels[i];
        per.push_back(std::move(row));
    }
    return {{"accuracy", r.accuracy},   {"f1_macro", r.f1_macro},     {"precision_macro", r.precision_macro},
            {"recall_macro", r.recall_macro}, {"total", r.total}, {"per_class", std::move(per)},
            {"confusion", r.confusion}, {"zero_division", 0}};
}

}  // namespace sensortext
