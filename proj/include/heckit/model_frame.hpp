#pragma once

#include "heckit/linalg.hpp"
#include "heckit/panel.hpp"

#include <string>
#include <vector>

namespace heckit {

struct PercentileFilter {
    std::string code;
    double low_p = 0.0;
    double high_p = 1.0;
};

inline const std::vector<std::string> kVaccineDummies = {"west", "china", "russia"};

struct ModelSpec {
    std::string name;
    std::vector<std::string> selection_vars;
    std::vector<std::string> outcome_vars;
    bool include_vaccine_dummies = true;
    // Applied in order before the frame is built.
    std::vector<PercentileFilter> panel_filter;
    std::string indicator = std::string(kStarted);
    std::string outcome = std::string(kVacPhp);
};

// Throws std::invalid_argument when a ModelSpec breaks the exclusion pattern.
void validate_spec(const ModelSpec& spec);

struct ModelFrame {
    Vector selection_y;
    Matrix selection_x;
    std::vector<std::string> selection_columns;
    std::vector<std::string> selection_rows;

    Vector outcome_y;
    Matrix outcome_x;
    std::vector<std::string> outcome_columns;
    std::vector<std::string> outcome_rows;

    // Position of each outcome row within the selection rows.
    std::vector<Index> selected;

    Index n_total() const { return selection_x.rows(); }
    Index n_selected() const { return outcome_x.rows(); }
};

// Checks shapes, finiteness, the selected-row mapping and full column rank.
void validate_frame(const ModelFrame& frame);

// Vaccine dummies, when requested, enter the outcome stage; the intercept is the last column of both matrices.
ModelFrame build_model_frame(const Panel& panel, const ModelSpec& spec);

Panel apply_filters(const Panel& panel, const std::vector<PercentileFilter>& filters);

}  // namespace heckit
