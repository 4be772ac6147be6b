#pragma once

/// Run reports: a fixed-order JSON document per experiment and an optional
/// plot-ready CSV table.

#include <ostream>
#include <string>
#include <vector>

#include "biharm/experiments/config.hpp"

namespace biharm::experiments {

enum class Status { pass, fail, inconclusive };

std::string to_string(Status s);

struct Check {
    std::string name;
    Status status = Status::pass;
    /// Measured quantity compared with the tolerance (NaN when not numeric).
    double value = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    bool empty() const { return header.empty(); }
};

/// Scientific notation with 17 significant digits.
std::string format_csv_number(double v);
void write_csv(std::ostream& out, const CsvTable& table);

struct RunReport {
    std::string experiment;
    Json config;
    std::vector<Check> checks;
    Json summary = Json::object();
    CsvTable csv;

    void add_check(std::string name, bool ok, double value, double tolerance,
                   std::string note = {});
    void add_inconclusive(std::string name, std::string note);

    /// fail if any check failed, otherwise inconclusive if any check was,
    /// otherwise pass.
    Status status() const;
    Json to_json() const;
};

/// Exit code of a finished run: 0 pass or inconclusive, 1 failed check.
int exit_code(const std::vector<RunReport>& reports);

} // namespace biharm::experiments
