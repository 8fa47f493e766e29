#include "heckit/panel.hpp"

#include "heckit/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace heckit {
namespace {

bool parse_int(std::string_view s, int& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::optional<double> parse_number(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// Splits one CSV document into records of fields. Quoted fields may contain commas, quotes and newlines.
std::vector<std::vector<std::string>> split_csv(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    bool closed = false;
    std::size_t line = 1;
    std::size_t quote_line = 0;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
        closed = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                    closed = true;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"') {
            if (field_started || !field.empty()) {
                throw ParseError(rows.size() + 1, row.size() + 1, "unexpected quote inside unquoted field");
            }
            quoted = true;
            field_started = true;
            quote_line = line;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') continue;
            end_row();
            ++line;
        } else if (c == '\n') {
            end_row();
            ++line;
        } else {
            if (closed) {
                throw ParseError(rows.size() + 1, row.size() + 1, "characters after closing quote");
            }
            field += c;
        }
    }
    if (quoted) throw ParseError(rows.size() + 1, row.size() + 1, "unterminated quoted field (opened on line " + std::to_string(quote_line) + ")");
    if (!field.empty() || !row.empty()) end_row();
    return rows;
}

std::string quote_csv(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

Date parse_date(std::string_view text) {
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_int(text.substr(0, 4), y) ||
        !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d)) {
        throw std::invalid_argument("not an ISO-8601 date: '" + std::string(text) + "'");
    }
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) throw std::invalid_argument("invalid calendar date: '" + std::string(text) + "'");
    return date;
}

std::string format_date(Date date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

std::string_view to_string(Transform t) {
    switch (t) {
        case Transform::none: return "none";
        case Transform::log: return "log";
        case Transform::binary: return "binary";
    }
    return "none";
}

Transform parse_transform(std::string_view text) {
    if (text == "none") return Transform::none;
    if (text == "log") return Transform::log;
    if (text == "binary") return Transform::binary;
    throw SchemaError("unknown transform '" + std::string(text) + "'");
}

const VariableDef* Schema::find(std::string_view code) const {
    for (const auto& v : variables) {
        if (v.code == code) return &v;
    }
    return nullptr;
}

Schema parse_schema(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("schema is not valid JSON: ") + e.what());
    }
    Schema schema;
    try {
        if (doc.contains("snapshot_date")) schema.snapshot_date = parse_date(doc.at("snapshot_date").get<std::string>());
        if (doc.contains("date_columns")) schema.date_columns = doc.at("date_columns").get<std::vector<std::string>>();
        std::set<std::string> seen(schema.date_columns.begin(), schema.date_columns.end());
        for (const auto& v : doc.at("variables")) {
            VariableDef def;
            def.code = v.at("code").get<std::string>();
            def.transform = parse_transform(v.at("transform").get<std::string>());
            def.source_label = v.value("source_label", "");
            if (def.code.empty()) throw SchemaError("variable with empty code");
            if (def.code == "iso3" || def.code == "name" || !seen.insert(def.code).second) {
                throw SchemaError("duplicate variable code '" + def.code + "'");
            }
            schema.variables.push_back(std::move(def));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed schema: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("malformed schema: ") + e.what());
    }
    return schema;
}

Schema load_schema(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open schema file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_schema(ss.str());
}

std::optional<double> apply_log(double value) {
    if (!(value > 0.0) || !std::isfinite(value)) return std::nullopt;
    return std::log(value);
}

std::optional<double> apply_log(double value, AuditLog& audit, std::string_view iso3, std::string_view code) {
    auto out = apply_log(value);
    if (!out) {
        audit.push_back({std::string(iso3), std::string(code),
                         "log of non-positive value " + format_number(value) + " set to missing"});
    }
    return out;
}

std::optional<double> CountryRecord::value(std::string_view code) const {
    auto it = values.find(code);
    return it == values.end() ? std::nullopt : it->second;
}

std::optional<double> CountryRecord::raw_value(std::string_view code) const {
    auto it = raw.find(code);
    return it == raw.end() ? std::nullopt : it->second;
}

std::size_t Panel::started_count() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const CountryRecord& r) {
        return r.value(kStarted) == 1.0;
    }));
}

Panel read_panel(std::istream& in, const Schema& schema) {
    const auto rows = split_csv(in);
    if (rows.empty()) throw ParseError(1, 1, "empty file");

    Panel panel;
    panel.schema = schema;
    panel.columns = rows[0];
    const auto& header = rows[0];

    std::optional<std::size_t> iso_col, name_col;
    std::set<std::string> seen;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto& h = header[c];
        if (!seen.insert(h).second) throw ParseError(1, c + 1, "duplicate column '" + h + "'");
        if (h == "iso3") {
            iso_col = c;
        } else if (h == "name") {
            name_col = c;
        } else if (!schema.find(h) &&
                   std::find(schema.date_columns.begin(), schema.date_columns.end(), h) == schema.date_columns.end()) {
            throw SchemaError("unknown column '" + h + "' (column " + std::to_string(c + 1) + ")");
        }
    }
    if (!iso_col) throw SchemaError("missing required column 'iso3'");
    for (const auto& v : schema.variables) {
        if (!seen.count(v.code)) throw SchemaError("missing column '" + v.code + "' declared in schema");
    }
    if (rows.size() < 2) throw ParseError(2, 1, "no data rows");

    const bool has_started = schema.find(kStarted) != nullptr;
    std::set<std::string> ids;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& fields = rows[r];
        const std::size_t line = r + 1;
        if (fields.size() != header.size()) {
            throw ParseError(line, std::min(fields.size(), header.size()) + 1,
                             "expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()));
        }
        CountryRecord rec;
        rec.iso3 = fields[*iso_col];
        if (rec.iso3.empty()) throw ParseError(line, *iso_col + 1, "empty iso3 code");
        if (!ids.insert(rec.iso3).second) throw ParseError(line, *iso_col + 1, "duplicate iso3 '" + rec.iso3 + "'");
        if (name_col) rec.name = fields[*name_col];

        for (std::size_t c = 0; c < header.size(); ++c) {
            const auto& code = header[c];
            if (c == *iso_col || (name_col && c == *name_col)) continue;
            const auto& cell = fields[c];
            const VariableDef* def = schema.find(code);
            if (!def) {
                std::optional<Date> d;
                if (!cell.empty()) {
                    try {
                        d = parse_date(cell);
                    } catch (const std::invalid_argument& e) {
                        throw ParseError(line, c + 1, e.what());
                    }
                }
                rec.dates[code] = d;
                continue;
            }
            std::optional<double> raw = parse_number(cell);
            if (!raw && !cell.empty()) {
                panel.audit.push_back({rec.iso3, code, "unparseable value '" + cell + "' set to missing"});
            }
            rec.raw[code] = raw;
            std::optional<double> value = raw;
            if (raw) {
                switch (def->transform) {
                    case Transform::log:
                        value = apply_log(*raw, panel.audit, rec.iso3, code);
                        break;
                    case Transform::binary:
                        if (*raw != 0.0 && *raw != 1.0) {
                            throw ParseError(line, c + 1, "binary variable '" + code + "' must be 0 or 1");
                        }
                        break;
                    case Transform::none:
                        break;
                }
            }
            rec.values[code] = value;
        }

        if (has_started) {
            const auto started = rec.value(kStarted);
            if (!started) throw ParseError(line, 1, "missing started indicator for " + rec.iso3);
            for (std::string_view code : {kVacPhp, kDays}) {
                if (*started == 0.0 && rec.raw_value(code)) {
                    throw ParseError(line, 1, std::string(code) + " present for a country that has not started");
                }
            }
            const auto first = rec.dates.find(kFirstVaccination);
            const auto last = rec.dates.find(kVaccinationDataDate);
            if (*started == 1.0 && schema.find(kDays) && first != rec.dates.end() && last != rec.dates.end() &&
                first->second && last->second) {
                long days = 0;
                try {
                    days = days_since_first_vaccination(*first->second, *last->second);
                } catch (const std::invalid_argument& e) {
                    throw ParseError(line, 1, rec.iso3 + ": " + e.what());
                }
                const auto stored = rec.raw_value(kDays);
                if (!stored) {
                    rec.raw[std::string(kDays)] = static_cast<double>(days);
                    rec.values[std::string(kDays)] = static_cast<double>(days);
                    panel.audit.push_back({rec.iso3, std::string(kDays), "derived from vaccination dates"});
                } else if (*stored != static_cast<double>(days)) {
                    throw ParseError(line, 1, rec.iso3 + ": days does not match the vaccination dates");
                }
            }
        }
        panel.records.push_back(std::move(rec));
    }
    return panel;
}

Panel load_panel(const std::string& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open data file '" + path + "'");
    return read_panel(in, schema);
}

void write_panel(std::ostream& out, const Panel& panel) {
    for (std::size_t c = 0; c < panel.columns.size(); ++c) {
        if (c) out << ',';
        out << quote_csv(panel.columns[c]);
    }
    out << '\n';
    for (const auto& rec : panel.records) {
        for (std::size_t c = 0; c < panel.columns.size(); ++c) {
            if (c) out << ',';
            const auto& col = panel.columns[c];
            if (col == "iso3") {
                out << quote_csv(rec.iso3);
            } else if (col == "name") {
                out << quote_csv(rec.name);
            } else if (auto it = rec.dates.find(col); it != rec.dates.end()) {
                if (it->second) out << format_date(*it->second);
            } else if (auto v = rec.raw_value(col)) {
                out << format_number(*v);
            }
        }
        out << '\n';
    }
}

std::string panel_to_csv(const Panel& panel) {
    std::ostringstream ss;
    write_panel(ss, panel);
    return ss.str();
}

std::string render_audit(const AuditLog& audit) {
    std::string out;
    for (const auto& e : audit) out += e.iso3 + "\t" + e.code + "\t" + e.message + "\n";
    return out;
}

std::optional<double> average_gov_response(const std::vector<DailyValue>& daily_index, Date first_case_date,
                                           Date end_date) {
    const std::chrono::sys_days lo{first_case_date};
    const std::chrono::sys_days hi{end_date};
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& d : daily_index) {
        const std::chrono::sys_days t{d.date};
        if (t < lo || t > hi || !std::isfinite(d.value)) continue;
        sum += d.value;
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

long days_since_first_vaccination(Date first_vaccination_date, Date end_date) {
    const auto diff = std::chrono::sys_days{end_date} - std::chrono::sys_days{first_vaccination_date};
    if (diff.count() < 0) {
        throw std::invalid_argument("first vaccination " + format_date(first_vaccination_date) + " is after " +
                                    format_date(end_date));
    }
    return static_cast<long>(diff.count());
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty collection");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile probability outside [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Panel filter_percentile(const Panel& panel, std::string_view code, double low_p, double high_p) {
    if (!panel.schema.find(code)) throw std::invalid_argument("unknown variable '" + std::string(code) + "'");
    if (!(low_p < high_p)) throw std::invalid_argument("filter requires low_p < high_p");
    std::vector<double> present;
    for (const auto& r : panel.records) {
        if (auto v = r.value(code)) present.push_back(*v);
    }
    Panel out = panel;
    if (present.empty()) return out;
    const double lo = quantile(present, low_p);
    const double hi = quantile(present, high_p);
    out.records.clear();
    for (const auto& r : panel.records) {
        const auto v = r.value(code);
        if (!v || (*v >= lo && *v <= hi)) out.records.push_back(r);
    }
    return out;
}

}  // namespace heckit
