#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gradekit/agreement.hpp"

namespace gradekit {

/// One table row in the shape of the results tables: a method label plus the
/// eight statistics.
struct ResultsTableRow {
    std::string method;
    AgreementReport report;
};

enum class TableFormat { Plain, Csv, Markdown };

TableFormat table_format_from_string(const std::string& text);

/// Human rendering: three decimals, undefined cells shown as "undef".
std::string render_table(const std::vector<ResultsTableRow>& rows, TableFormat format);

/// Machine rendering: full-precision values, undefined encoded as null.
/// report_from_json(report_to_json(r)) == r (parse-back losslessness).
nlohmann::json report_to_json(const AgreementReport& report, const std::string& method_label);
AgreementReport report_from_json(const nlohmann::json& doc);

bool reports_equal(const AgreementReport& a, const AgreementReport& b);

}  // namespace gradekit
