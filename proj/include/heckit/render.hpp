#pragma once

#include "heckit/replication.hpp"

#include <string>

namespace heckit {

// Fixed-point text rounded half away from zero; empty for NaN.
std::string round_fixed(double value, int decimals = 3);

std::string render_markdown(const TableResult& table);
std::string render_csv(const TableResult& table);

std::string render_figure_csv(const FigureData& figure);
std::string render_figure_svg(const FigureData& figure);

}  // namespace heckit
