#include "heckit/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace heckit {
namespace {

std::string shortest(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string md_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Frame {
    double x0, x1, y0, y1;
    double left = 70, right = 20, top = 40, bottom = 50;
    double width = 640, height = 420;

    double sx(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double sy(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

Frame padded(double x0, double x1, double y0, double y1) {
    auto pad = [](double& a, double& b) {
        if (!(b > a)) {
            a -= 0.5;
            b += 0.5;
        }
        const double d = 0.05 * (b - a);
        a -= d;
        b += d;
    };
    pad(x0, x1);
    pad(y0, y1);
    return Frame{x0, x1, y0, y1};
}

std::string svg_open(const Frame& f, const std::string& title) {
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
      << "\" viewBox=\"0 0 " << f.width << " " << f.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << px(f.width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
      << xml_escape(title) << "</text>\n";
    return o.str();
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    std::ostringstream o;
    const double bx = f.left, by = f.height - f.bottom, tx = f.width - f.right, ty = f.top;
    o << "<path d=\"M" << px(bx) << " " << px(ty) << " L" << px(bx) << " " << px(by) << " L" << px(tx) << " "
      << px(by) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        o << "<text x=\"" << px(f.sx(xv)) << "\" y=\"" << px(by + 15) << "\" text-anchor=\"middle\">" << px(xv)
          << "</text>\n";
        o << "<text x=\"" << px(bx - 5) << "\" y=\"" << px(f.sy(yv) + 4) << "\" text-anchor=\"end\">" << px(yv)
          << "</text>\n";
    }
    o << "<text x=\"" << px((bx + tx) / 2) << "\" y=\"" << px(f.height - 12) << "\" text-anchor=\"middle\">"
      << xml_escape(xlabel) << "</text>\n";
    o << "<text x=\"15\" y=\"" << px((by + ty) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << px((by + ty) / 2) << ")\">" << xml_escape(ylabel) << "</text>\n";
    return o.str();
}

std::string boxplot_svg(const FigureData& fig) {
    const Series* s = fig.find("boxplot");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : s->rows) {
        for (std::size_t k = 0; k < 5; ++k) {
            if (std::isfinite(r[k])) {
                lo = std::min(lo, r[k]);
                hi = std::max(hi, r[k]);
            }
        }
    }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    const Frame f = padded(0.0, static_cast<double>(s->rows.size()), lo, hi);
    std::string out = svg_open(f, fig.title) + axes(f, "group", "log GDP");
    std::ostringstream o;
    for (std::size_t g = 0; g < s->rows.size(); ++g) {
        const auto& r = s->rows[g];
        if (!std::isfinite(r[0])) continue;
        const double c = static_cast<double>(g) + 0.5;
        const double xl = f.sx(c - 0.2), xr = f.sx(c + 0.2), xc = f.sx(c);
        o << "<line x1=\"" << px(xc) << "\" y1=\"" << px(f.sy(r[0])) << "\" x2=\"" << px(xc) << "\" y2=\""
          << px(f.sy(r[4])) << "\" stroke=\"black\"/>\n";
        o << "<rect x=\"" << px(xl) << "\" y=\"" << px(f.sy(r[3])) << "\" width=\"" << px(xr - xl) << "\" height=\""
          << px(f.sy(r[1]) - f.sy(r[3])) << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
        o << "<line x1=\"" << px(xl) << "\" y1=\"" << px(f.sy(r[2])) << "\" x2=\"" << px(xr) << "\" y2=\""
          << px(f.sy(r[2])) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << px(xc) << "\" y=\"" << px(f.height - f.bottom - 4) << "\" text-anchor=\"middle\">"
          << xml_escape(s->labels[g]) << "</text>\n";
    }
    return out + o.str() + "</svg>\n";
}

std::string curve_svg(const FigureData& fig) {
    const Series* c = fig.find("curve");
    const Series* p = fig.find("countries");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : c->rows) {
        lo = std::min(lo, r[0]);
        hi = std::max(hi, r[0]);
    }
    if (p) {
        for (const auto& r : p->rows) {
            lo = std::min(lo, r[0]);
            hi = std::max(hi, r[0]);
        }
    }
    const Frame f = padded(lo, hi, 0.0, 1.0);
    std::ostringstream o;
    o << "<polygon fill=\"#c6dbef\" stroke=\"none\" points=\"";
    for (const auto& r : c->rows) o << px(f.sx(r[0])) << "," << px(f.sy(r[3])) << " ";
    for (auto it = c->rows.rbegin(); it != c->rows.rend(); ++it) o << px(f.sx((*it)[0])) << "," << px(f.sy((*it)[2])) << " ";
    o << "\"/>\n<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\" points=\"";
    for (const auto& r : c->rows) o << px(f.sx(r[0])) << "," << px(f.sy(r[1])) << " ";
    o << "\"/>\n";
    if (p) {
        for (const auto& r : p->rows) {
            const bool sp = r.size() > 2 && r[2] == 1.0;
            o << "<circle cx=\"" << px(f.sx(r[0])) << "\" cy=\"" << px(f.sy(r[1])) << "\" r=\"3\" fill=\""
              << (sp ? "#fd8d3c" : "#636363") << "\" fill-opacity=\"0.7\"/>\n";
        }
    }
    return svg_open(f, fig.title) + axes(f, "log GDP", "probability of starting") + o.str() + "</svg>\n";
}

std::string scatter_svg(const FigureData& fig) {
    const Series* p = fig.find("countries");
    const Series* l = fig.find("fit");
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const Series* s : {p, l}) {
        if (!s) continue;
        for (const auto& r : s->rows) {
            x0 = std::min(x0, r[0]);
            x1 = std::max(x1, r[0]);
            y0 = std::min(y0, r[1]);
            y1 = std::max(y1, r[1]);
        }
    }
    const Frame f = padded(x0, x1, y0, y1);
    std::ostringstream o;
    if (p) {
        for (const auto& r : p->rows) {
            o << "<circle cx=\"" << px(f.sx(r[0])) << "\" cy=\"" << px(f.sy(r[1]))
              << "\" r=\"3\" fill=\"#636363\" fill-opacity=\"0.8\"/>\n";
        }
    }
    if (l && l->rows.size() == 2) {
        o << "<line x1=\"" << px(f.sx(l->rows[0][0])) << "\" y1=\"" << px(f.sy(l->rows[0][1])) << "\" x2=\""
          << px(f.sx(l->rows[1][0])) << "\" y2=\"" << px(f.sy(l->rows[1][1]))
          << "\" stroke=\"#cb181d\" stroke-width=\"2\"/>\n";
    }
    const std::string xl = p && !p->columns.empty() ? p->columns[0] : "x";
    const std::string yl = p && p->columns.size() > 1 ? p->columns[1] : "y";
    return svg_open(f, fig.title) + axes(f, xl, yl) + o.str() + "</svg>\n";
}

std::string heatmap_svg(const FigureData& fig) {
    const Series* s = fig.find("correlation");
    const std::size_t k = s->columns.size();
    Frame f{0, 1, 0, 1};
    f.left = 110;
    f.bottom = 110;
    f.width = 110 + 40.0 * static_cast<double>(k) + 20;
    f.height = 40 + 40.0 * static_cast<double>(k) + 110;
    std::ostringstream o;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double r = s->rows[i][j];
            const double x = f.left + 40.0 * static_cast<double>(j);
            const double y = f.top + 40.0 * static_cast<double>(i);
            std::string fill = "#f0f0f0";
            if (std::isfinite(r)) {
                const int a = static_cast<int>(std::lround(255.0 * (1.0 - std::min(1.0, std::abs(r)))));
                char buf[16];
                if (r >= 0) {
                    std::snprintf(buf, sizeof buf, "#ff%02x%02x", a, a);
                } else {
                    std::snprintf(buf, sizeof buf, "#%02x%02xff", a, a);
                }
                fill = buf;
            }
            o << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"40\" height=\"40\" fill=\"" << fill
              << "\" stroke=\"white\"/>\n";
            o << "<text x=\"" << px(x + 20) << "\" y=\"" << px(y + 24) << "\" text-anchor=\"middle\" font-size=\"10\">"
              << (std::isfinite(r) ? round_fixed(r, 2) : std::string("")) << "</text>\n";
        }
        o << "<text x=\"" << px(f.left - 5) << "\" y=\"" << px(f.top + 40.0 * static_cast<double>(i) + 24)
          << "\" text-anchor=\"end\">" << xml_escape(s->labels[i]) << "</text>\n";
        const double cx = f.left + 40.0 * static_cast<double>(i) + 20;
        const double cy = f.top + 40.0 * static_cast<double>(k) + 8;
        o << "<text x=\"" << px(cx) << "\" y=\"" << px(cy) << "\" text-anchor=\"end\" transform=\"rotate(-60 "
          << px(cx) << " " << px(cy) << ")\">" << xml_escape(s->columns[i]) << "</text>\n";
    }
    return svg_open(f, fig.title) + o.str() + "</svg>\n";
}

}  // namespace

std::string round_fixed(double value, int decimals) {
    if (std::isnan(value)) return "";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    const double scale = std::pow(10.0, decimals);
    double r = std::round(value * scale) / scale;
    if (r == 0.0) r = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, r);
    return buf;
}

std::string render_markdown(const TableResult& t) {
    std::ostringstream o;
    o << "# " << t.title << "\n\n| Variable |";
    for (const auto& c : t.columns) o << " " << md_escape(c) << " |";
    o << "\n|---|";
    for (std::size_t i = 0; i < t.columns.size(); ++i) o << "---|";
    o << "\n";
    for (const auto& row : t.rows) {
        o << "| " << md_escape(row.label) << " |";
        bool any_se = false;
        for (const auto& c : row.cells) {
            o << " ";
            if (c) {
                o << round_fixed(c->value) << to_string(c->stars);
                if (t.inline_se && c->se) o << " (" << round_fixed(*c->se) << ")";
                any_se = any_se || c->se.has_value();
            }
            o << " |";
        }
        o << "\n";
        if (!t.inline_se && any_se) {
            o << "| |";
            for (const auto& c : row.cells) {
                o << " ";
                if (c && c->se) o << "(" << round_fixed(*c->se) << ")";
                o << " |";
            }
            o << "\n";
        }
    }
    o << "| Observations |";
    for (const auto& n : t.observations) o << " " << (n ? std::to_string(*n) : std::string("")) << " |";
    o << "\n";
    bool errors = false;
    for (std::size_t c = 0; c < t.column_errors.size(); ++c) {
        if (!t.column_errors[c]) continue;
        if (!errors) o << "\n";
        errors = true;
        o << "Error in " << t.columns[c] << ": " << *t.column_errors[c] << "\n";
    }
    if (!t.notes.empty()) {
        o << "\n";
        for (const auto& n : t.notes) o << n << "\n";
    }
    return o.str();
}

std::string render_csv(const TableResult& t) {
    std::ostringstream o;
    o << "variable,label,column,value,se,stars\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.cells.size() && c < t.columns.size(); ++c) {
            const auto& cell = row.cells[c];
            if (!cell) continue;
            o << csv_field(row.code) << "," << csv_field(row.label) << "," << csv_field(t.columns[c]) << ","
              << round_fixed(cell->value) << "," << (cell->se ? round_fixed(*cell->se) : std::string("")) << ","
              << to_string(cell->stars) << "\n";
        }
    }
    for (std::size_t c = 0; c < t.observations.size() && c < t.columns.size(); ++c) {
        if (!t.observations[c]) continue;
        o << "observations,Observations," << csv_field(t.columns[c]) << "," << *t.observations[c] << ",,\n";
    }
    return o.str();
}

std::string render_figure_csv(const FigureData& fig) {
    std::vector<std::string> cols;
    for (const auto& s : fig.series) {
        for (const auto& c : s.columns) {
            if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
        }
    }
    if (!fig.summary.empty() && std::find(cols.begin(), cols.end(), "value") == cols.end()) cols.emplace_back("value");
    std::ostringstream o;
    o << "series,label";
    for (const auto& c : cols) o << "," << csv_field(c);
    o << "\n";
    for (const auto& s : fig.series) {
        for (std::size_t r = 0; r < s.rows.size(); ++r) {
            o << csv_field(s.name) << "," << csv_field(r < s.labels.size() ? s.labels[r] : "");
            for (const auto& c : cols) {
                o << ",";
                if (auto idx = s.column(c); idx && *idx < s.rows[r].size()) o << shortest(s.rows[r][*idx]);
            }
            o << "\n";
        }
    }
    for (const auto& [key, value] : fig.summary) {
        o << "summary," << csv_field(key);
        for (const auto& c : cols) o << "," << (c == "value" ? shortest(value) : std::string(""));
        o << "\n";
    }
    return o.str();
}

std::string render_figure_svg(const FigureData& fig) {
    if (fig.find("boxplot")) return boxplot_svg(fig);
    if (fig.find("curve")) return curve_svg(fig);
    if (fig.find("correlation")) return heatmap_svg(fig);
    return scatter_svg(fig);
}

}  // namespace heckit
