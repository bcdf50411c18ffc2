#include "gradekit/report.hpp"

#include <array>
#include <cstdio>
#include <sstream>

#include "gradekit/errors.hpp"

namespace gradekit {

namespace {

constexpr std::array<const char*, 8> kColumns = {
    "r", "r_s", "tau_b", "l_n", "ICC1", "ICC2", "ICC3", "kappa_B"};

std::array<std::optional<double>, 8> fields(const AgreementReport& r) {
    return {r.pearson, r.spearman, r.kendall_tau_b, r.leniency,
            r.icc1,    r.icc2,     r.icc3,          r.kappa};
}

std::string cell(const std::optional<double>& value) {
    if (!value) return "undef";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3f", *value);
    return buffer;
}

std::string pad(const std::string& text, std::size_t width) {
    return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

nlohmann::json optional_json(const std::optional<double>& value) {
    if (!value) return nullptr;
    return *value;
}

std::optional<double> optional_from(const nlohmann::json& value) {
    if (value.is_null()) return std::nullopt;
    return value.get<double>();
}

}  // namespace

TableFormat table_format_from_string(const std::string& text) {
    if (text == "plain") return TableFormat::Plain;
    if (text == "csv") return TableFormat::Csv;
    if (text == "markdown" || text == "md") return TableFormat::Markdown;
    throw UsageError("unknown table format '" + text + "' (plain, csv, markdown)");
}

std::string render_table(const std::vector<ResultsTableRow>& rows, TableFormat format) {
    std::ostringstream out;
    switch (format) {
        case TableFormat::Csv: {
            out << "Method";
            for (const auto* column : kColumns) out << ',' << column;
            out << '\n';
            for (const auto& row : rows) {
                out << row.method;
                for (const auto& value : fields(row.report)) out << ',' << cell(value);
                out << '\n';
            }
            break;
        }
        case TableFormat::Markdown: {
            out << "| Method |";
            for (const auto* column : kColumns) out << ' ' << column << " |";
            out << "\n|---|";
            for (std::size_t i = 0; i < kColumns.size(); ++i) out << "---|";
            out << '\n';
            for (const auto& row : rows) {
                out << "| " << row.method << " |";
                for (const auto& value : fields(row.report)) out << ' ' << cell(value) << " |";
                out << '\n';
            }
            break;
        }
        case TableFormat::Plain: {
            std::size_t label_width = 6;
            for (const auto& row : rows) label_width = std::max(label_width, row.method.size());
            out << pad("Method", label_width + 2);
            for (const auto* column : kColumns) out << pad(column, 9);
            out << '\n';
            for (const auto& row : rows) {
                out << pad(row.method, label_width + 2);
                for (const auto& value : fields(row.report)) out << pad(cell(value), 9);
                out << '\n';
            }
            break;
        }
    }
    return out.str();
}

nlohmann::json report_to_json(const AgreementReport& report, const std::string& method_label) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["method"] = method_label;
    doc["n"] = report.n;
    doc["bins"] = report.bins;
    doc["pearson"] = optional_json(report.pearson);
    doc["spearman"] = optional_json(report.spearman);
    doc["kendall_tau_b"] = optional_json(report.kendall_tau_b);
    doc["leniency"] = optional_json(report.leniency);
    doc["icc1"] = optional_json(report.icc1);
    doc["icc2"] = optional_json(report.icc2);
    doc["icc3"] = optional_json(report.icc3);
    doc["kappa"] = optional_json(report.kappa);
    nlohmann::json reasons = nlohmann::json::object();
    for (const auto& [stat, reason] : report.undefined_reasons) reasons[stat] = reason;
    doc["undefined_reasons"] = reasons;
    return doc;
}

AgreementReport report_from_json(const nlohmann::json& doc) {
    AgreementReport report;
    report.n = doc.at("n").get<int>();
    report.bins = doc.at("bins").get<int>();
    report.pearson = optional_from(doc.at("pearson"));
    report.spearman = optional_from(doc.at("spearman"));
    report.kendall_tau_b = optional_from(doc.at("kendall_tau_b"));
    report.leniency = optional_from(doc.at("leniency"));
    report.icc1 = optional_from(doc.at("icc1"));
    report.icc2 = optional_from(doc.at("icc2"));
    report.icc3 = optional_from(doc.at("icc3"));
    report.kappa = optional_from(doc.at("kappa"));
    if (doc.contains("undefined_reasons"))
        for (const auto& [stat, reason] : doc.at("undefined_reasons").items())
            report.undefined_reasons[stat] = reason.get<std::string>();
    return report;
}

bool reports_equal(const AgreementReport& a, const AgreementReport& b) {
    const auto fa = fields(a);
    const auto fb = fields(b);
    for (std::size_t i = 0; i < fa.size(); ++i) {
        if (fa[i].has_value() != fb[i].has_value()) return false;
        if (fa[i] && *fa[i] != *fb[i]) return false;
    }
    return a.n == b.n && a.bins == b.bins && a.undefined_reasons == b.undefined_reasons;
}

}  // namespace gradekit
