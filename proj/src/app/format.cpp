#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "cavityent/app.hpp"

namespace cavityent::app::format {

using nlohmann::json;

namespace {

void flatten(const json& node, const std::string& key, std::ostringstream& out) {
    if (node.is_object()) {
        for (const auto& item : node.items()) {
            flatten(item.value(), key.empty() ? item.key() : key + "." + item.key(), out);
        }
        return;
    }
    if (node.is_array() && !node.empty() && node.front().is_object()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            flatten(node[i], key + "." + std::to_string(i), out);
        }
        return;
    }
    out << key << ',';
    if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            out << (i ? ";" : "") << (node[i].is_number() ? number(node[i].get<double>()) : node[i].dump());
        }
    } else if (node.is_number_float()) {
        out << number(node.get<double>());
    } else if (node.is_string()) {
        out << node.get<std::string>();
    } else if (!node.is_null()) {
        out << node.dump();
    }
    out << '\n';
}

} // namespace

std::string number(double v) {
    if (v == 0.0) {
        return "0";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round12(double v) {
    if (!std::isfinite(v)) {
        return v;
    }
    return std::strtod(number(v).c_str(), nullptr);
}

json rounded(std::optional<double> v) {
    return v ? json(round12(*v)) : json(nullptr);
}

std::string json_text(const json& doc) {
    return doc.dump(2) + "\n";
}

std::string flat_csv(const json& doc) {
    std::ostringstream out;
    out << "key,value\n";
    flatten(doc, "", out);
    return out.str();
}

} // namespace cavityent::app::format
