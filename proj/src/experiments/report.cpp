#include "biharm/experiments/report.hpp"

#include <cmath>
#include <cstdio>

namespace biharm::experiments {

std::string to_string(Status s)
{
    switch (s) {
    case Status::pass:
        return "pass";
    case Status::fail:
        return "fail";
    case Status::inconclusive:
        return "inconclusive";
    }
    return "fail";
}

std::string format_csv_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_csv(std::ostream& out, const CsvTable& table)
{
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out << (i ? "," : "") << table.header[i];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_csv_number(row[i]);
        }
        out << "\n";
    }
}

void RunReport::add_check(std::string name, bool ok, double value, double tolerance,
                          std::string note)
{
    checks.push_back(Check{std::move(name), ok ? Status::pass : Status::fail, value, tolerance,
                           std::move(note)});
}

void RunReport::add_inconclusive(std::string name, std::string note)
{
    checks.push_back(Check{std::move(name), Status::inconclusive, std::nan(""), std::nan(""),
                           std::move(note)});
}

Status RunReport::status() const
{
    bool inconclusive = false;
    for (const auto& c : checks) {
        if (c.status == Status::fail) {
            return Status::fail;
        }
        inconclusive = inconclusive || c.status == Status::inconclusive;
    }
    return inconclusive ? Status::inconclusive : Status::pass;
}

namespace {

Json number_or_null(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

} // namespace

Json RunReport::to_json() const
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["experiment"] = experiment;
    j["status"] = to_string(status());
    j["config"] = config;
    Json cs = Json::array();
    for (const auto& c : checks) {
        Json e;
        e["name"] = c.name;
        e["status"] = to_string(c.status);
        e["value"] = number_or_null(c.value);
        e["tolerance"] = number_or_null(c.tolerance);
        if (!c.note.empty()) {
            e["note"] = c.note;
        }
        cs.push_back(std::move(e));
    }
    j["checks"] = std::move(cs);
    j["summary"] = summary;
    return j;
}

int exit_code(const std::vector<RunReport>& reports)
{
    for (const auto& r : reports) {
        if (r.status() == Status::fail) {
            return 1;
        }
    }
    return 0;
}

} // namespace biharm::experiments
