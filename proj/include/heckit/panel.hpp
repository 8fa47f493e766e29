#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heckit {

using Date = std::chrono::year_month_day;

Date parse_date(std::string_view text);
std::string format_date(Date date);

enum class Transform { none, log, binary };

std::string_view to_string(Transform t);
Transform parse_transform(std::string_view text);

struct VariableDef {
    std::string code;
    Transform transform = Transform::none;
    std::string source_label;
};

struct Schema {
    std::vector<VariableDef> variables;
    std::vector<std::string> date_columns;
    Date snapshot_date{std::chrono::year{2021}, std::chrono::month{1}, std::chrono::day{30}};

    const VariableDef* find(std::string_view code) const;
};

// Reads the JSON schema document. Throws SchemaError on duplicate codes or unknown transforms.
Schema parse_schema(std::string_view json_text);
Schema load_schema(const std::string& path);

// The built-in schema for the shipped snapshot, identical to data/schema.json.
Schema default_schema();

struct AuditEntry {
    std::string iso3;
    std::string code;
    std::string message;
};

using AuditLog = std::vector<AuditEntry>;

std::optional<double> apply_log(double value);
std::optional<double> apply_log(double value, AuditLog& audit, std::string_view iso3, std::string_view code);

struct CountryRecord {
    std::string iso3;
    std::string name;
    std::map<std::string, std::optional<double>, std::less<>> raw;
    std::map<std::string, std::optional<double>, std::less<>> values;
    std::map<std::string, std::optional<Date>, std::less<>> dates;

    // Modelling-scale value; empty when missing or the code is unknown.
    std::optional<double> value(std::string_view code) const;
    std::optional<double> raw_value(std::string_view code) const;
};

struct Panel {
    Schema schema;
    std::vector<std::string> columns;
    std::vector<CountryRecord> records;
    AuditLog audit;

    std::size_t size() const { return records.size(); }
    std::size_t started_count() const;
};

inline constexpr std::string_view kStarted = "started";
inline constexpr std::string_view kVacPhp = "vac_php";
inline constexpr std::string_view kDays = "days";
inline constexpr std::string_view kFirstVaccination = "first_vaccination";
inline constexpr std::string_view kVaccinationDataDate = "vaccination_data_date";

Panel read_panel(std::istream& in, const Schema& schema);
Panel load_panel(const std::string& path, const Schema& schema);

// Raw values are written in shortest round-trip form.
void write_panel(std::ostream& out, const Panel& panel);
std::string panel_to_csv(const Panel& panel);

std::string render_audit(const AuditLog& audit);

struct DailyValue {
    Date date;
    double value;
};

std::optional<double> average_gov_response(const std::vector<DailyValue>& daily_index, Date first_case_date,
                                           Date end_date);

long days_since_first_vaccination(Date first_vaccination_date, Date end_date);

// Type 7 quantile: linear interpolation between order statistics.
double quantile(std::vector<double> values, double p);

// Keeps records whose value lies within the [low_p, high_p] quantiles; records missing the value are kept.
Panel filter_percentile(const Panel& panel, std::string_view code, double low_p, double high_p);

}  // namespace heckit
