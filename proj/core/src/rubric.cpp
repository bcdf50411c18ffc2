#include "gradekit/rubric.hpp"

#include <cmath>
#include <set>

#include "gradekit/errors.hpp"

namespace gradekit {

namespace {

void validate_node(const RubricNode& node, const std::string& path,
                   std::vector<RubricViolation>& out) {
    if (node.label.find('/') != std::string::npos)
        out.push_back({path, "label contains '/'"});

    if (node.is_leaf()) {
        if (!(node.max_marks > Rational(0)))
            out.push_back({path, "leaf max_marks must be positive"});
        return;
    }

    std::set<std::string> labels;
    std::size_t grouped = 0;
    for (const auto& child : node.children) {
        if (!labels.insert(child.label).second)
            out.push_back({path, "duplicate sibling label '" + child.label + "'"});
        if (child.approach_group) ++grouped;
    }
    if (grouped != 0 && grouped != node.children.size())
        out.push_back({path, "mix of approach-grouped and ungrouped children"});

    Rational expected(0);
    if (grouped == node.children.size() && grouped > 0) {
        for (const auto& child : node.children)
            if (child.max_marks > expected) expected = child.max_marks;
    } else {
        for (const auto& child : node.children) expected += child.max_marks;
    }
    const double diff = (node.max_marks - expected).to_double();
    if (std::fabs(diff) > kMarksTolerance) {
        const char* rule = grouped ? "max over approach subtrees" : "sum of children";
        out.push_back({path, "max_marks " + node.max_marks.to_string() + " != " + rule + " " +
                                 expected.to_string()});
    }

    for (const auto& child : node.children) {
        const std::string child_path = path.empty() ? child.label : path + "/" + child.label;
        validate_node(child, child_path, out);
    }
}

Rational aggregate_node(const nlohmann::json& node, const std::string& path) {
    if (node.is_number()) {
        const Rational mark = rational_from_json(node);
        if (mark.is_negative())
            throw NegativeMarkError("negative mark at '" + path + "'");
        return mark;
    }
    if (!node.is_object())
        throw MalformedTreeError("expected object or number at '" + path + "'");

    if (node.contains("Marks")) {
        const auto& marks = node.at("Marks");
        if (!marks.is_number())
            throw MalformedTreeError("non-numeric Marks at '" + path + "'");
        const Rational mark = rational_from_json(marks);
        if (mark.is_negative())
            throw NegativeMarkError("negative mark at '" + path + "'");
        return mark;
    }

    Rational total(0);
    for (const auto& [key, value] : node.items()) {
        if (key == "Feedback") continue;
        total += aggregate_node(value, path.empty() ? key : path + "/" + key);
    }
    return total;
}

}  // namespace

bool RubricNode::has_approach_alternatives() const {
    if (children.empty()) return false;
    for (const auto& child : children)
        if (!child.approach_group) return false;
    return true;
}

std::vector<RubricViolation> validate_rubric(const RubricNode& root) {
    std::vector<RubricViolation> out;
    validate_node(root, "", out);
    return out;
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    if (path.empty()) return parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t slash = path.find('/', start);
        if (slash == std::string_view::npos) {
            parts.emplace_back(path.substr(start));
            return parts;
        }
        parts.emplace_back(path.substr(start, slash - start));
        start = slash + 1;
    }
}

std::string join_path(const std::vector<std::string>& components) {
    std::string out;
    for (const auto& c : components) {
        if (!out.empty()) out += '/';
        out += c;
    }
    return out;
}

const RubricNode& resolve_path(const RubricNode& root, std::string_view path) {
    const RubricNode* node = &root;
    for (const auto& component : split_path(path)) {
        const RubricNode* next = nullptr;
        for (const auto& child : node->children) {
            if (child.label == component) { next = &child; break; }
        }
        if (!next)
            throw UnknownPathError("no rubric node '" + component + "' under '" +
                                   std::string(path) + "'");
        node = next;
    }
    return *node;
}

namespace {
void collect_leaves(const RubricNode& node, const std::string& path,
                    std::vector<std::pair<std::string, const RubricNode*>>& out) {
    if (node.is_leaf()) {
        out.emplace_back(path, &node);
        return;
    }
    for (const auto& child : node.children) {
        const std::string child_path = path.empty() ? child.label : path + "/" + child.label;
        collect_leaves(child, child_path, out);
    }
}
}  // namespace

std::vector<std::pair<std::string, const RubricNode*>> rubric_leaves(const RubricNode& root) {
    std::vector<std::pair<std::string, const RubricNode*>> out;
    collect_leaves(root, "", out);
    return out;
}

Rational aggregate_marks(const nlohmann::json& tree) {
    if (!tree.is_object())
        throw MalformedTreeError("criterion tree must be a JSON object");
    return aggregate_node(tree, "");
}

nlohmann::json rational_to_json(const Rational& value) {
    if (value.is_integer()) return value.numerator();
    return value.to_string();
}

Rational rational_from_json(const nlohmann::json& value) {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_number_unsigned()) return Rational(static_cast<std::int64_t>(value.get<std::uint64_t>()));
    if (value.is_number_float()) {
        // Shortest round-trip formatting recovers the decimal the author wrote.
        return Rational::parse(value.dump());
    }
    if (value.is_string()) return Rational::parse(value.get<std::string>());
    throw RationalParseError("expected number or rational string, got " + value.dump());
}

RubricNode parse_rubric(const nlohmann::json& doc) {
    if (!doc.is_object())
        throw MalformedTreeError("rubric node must be a JSON object");
    RubricNode node;
    if (!doc.contains("label") || !doc.at("label").is_string())
        throw MalformedTreeError("rubric node missing string 'label'");
    node.label = doc.at("label").get<std::string>();
    if (node.label.find('/') != std::string::npos)
        throw MalformedTreeError("rubric label '" + node.label + "' contains '/'");
    if (!doc.contains("max_marks"))
        throw MalformedTreeError("rubric node '" + node.label + "' missing 'max_marks'");
    node.max_marks = rational_from_json(doc.at("max_marks"));
    if (doc.contains("approach_group"))
        node.approach_group = doc.at("approach_group").get<std::string>();
    if (doc.contains("children")) {
        if (!doc.at("children").is_array())
            throw MalformedTreeError("rubric 'children' must be an array");
        for (const auto& child : doc.at("children")) node.children.push_back(parse_rubric(child));
    }
    return node;
}

namespace {
void render_text(const RubricNode& node, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += node.label;
    out += " [" + node.max_marks.to_string() + (node.max_marks == Rational(1) ? " mark]" : " marks]");
    out += '\n';
    for (const auto& child : node.children) render_text(child, depth + 1, out);
}
}  // namespace

std::string rubric_to_text(const RubricNode& root) {
    std::string out;
    render_text(root, 0, out);
    return out;
}

nlohmann::json rubric_to_json(const RubricNode& root) {
    nlohmann::json doc;
    doc["label"] = root.label;
    doc["max_marks"] = rational_to_json(root.max_marks);
    if (root.approach_group) doc["approach_group"] = *root.approach_group;
    if (!root.children.empty()) {
        nlohmann::json children = nlohmann::json::array();
        for (const auto& child : root.children) children.push_back(rubric_to_json(child));
        doc["children"] = children;
    }
    return doc;
}

}  // namespace gradekit
