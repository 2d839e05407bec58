#include <cmath>

#include "sheetcheck/checklist.hpp"
#include "util/strings.hpp"

namespace sheetcheck {

namespace {

CategoryScore category_totals(const Assessment& assessment, Category category, const Checklist& checklist) {
    CategoryScore s;
    for (const auto& q : checklist.questions()) {
        if (q.category != category) continue;
        s.total_weight += q.weight;
        s.earned_weight += q.weight * assessment.answer(q.id).credit;
    }
    s.score = s.total_weight > 0 ? 10.0 * s.earned_weight / s.total_weight : 0.0;
    return s;
}

}  // namespace

double score_category(const Assessment& assessment, Category category, const Checklist& checklist) {
    return category_totals(assessment, category, checklist).score;
}

ScoreCard score_overall(const Assessment& assessment, const Checklist& checklist) {
    ScoreCard card;
    for (Category c : kCategories) {
        auto s = category_totals(assessment, c, checklist);
        card.earned_weight += s.earned_weight;
        card.total_weight += s.total_weight;
        card.categories[c] = s;
    }
    card.overall = card.total_weight > 0 ? 10.0 * card.earned_weight / card.total_weight : 0.0;
    return card;
}

double round_score(double score) {
    // the epsilon absorbs binary noise such as 4.05 being stored as 4.0499999...
    return std::floor(score * 10.0 + 0.5 + 1e-9) / 10.0;
}

std::string format_score(double score) {
    const long tenths = std::lround(round_score(score) * 10.0);
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

}  // namespace sheetcheck
