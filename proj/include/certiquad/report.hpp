#pragma once

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace certiquad {

/// Minimal JSON value with deterministic serialization: object keys are
/// sorted, reals print with 17 significant digits (round-trip exact for
/// doubles), arrays keep insertion order.
class Json {
  public:
    Json() : value_(nullptr) {}

    static Json object() {
        Json j;
        j.value_ = Object{};
        return j;
    }
    static Json array() {
        Json j;
        j.value_ = Array{};
        return j;
    }
    static Json real(double v) {
        Json j;
        j.value_ = v;
        return j;
    }
    static Json integer(long long v) {
        Json j;
        j.value_ = v;
        return j;
    }
    static Json boolean(bool v) {
        Json j;
        j.value_ = v;
        return j;
    }
    static Json string(std::string v) {
        Json j;
        j.value_ = std::move(v);
        return j;
    }
    static Json null() { return Json{}; }

    Json& set(const std::string& key, Json v) {
        std::get<Object>(value_)[key] = std::make_shared<Json>(std::move(v));
        return *this;
    }

    Json& push(Json v) {
        std::get<Array>(value_).push_back(std::make_shared<Json>(std::move(v)));
        return *this;
    }

    std::string dump() const {
        std::string out;
        write(out);
        return out;
    }

  private:
    using Object = std::map<std::string, std::shared_ptr<Json>>;
    using Array = std::vector<std::shared_ptr<Json>>;
    std::variant<std::nullptr_t, bool, long long, double, std::string, Object, Array> value_;

    static void escape(const std::string& s, std::string& out) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    void write(std::string& out) const {
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            out += "null";
        } else if (const bool* b = std::get_if<bool>(&value_)) {
            out += *b ? "true" : "false";
        } else if (const long long* i = std::get_if<long long>(&value_)) {
            out += std::to_string(*i);
        } else if (const double* d = std::get_if<double>(&value_)) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", *d);
            out += buf;
        } else if (const std::string* s = std::get_if<std::string>(&value_)) {
            escape(*s, out);
        } else if (const Object* o = std::get_if<Object>(&value_)) {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : *o) {
                if (!first) out += ',';
                first = false;
                escape(k, out);
                out += ':';
                v->write(out);
            }
            out += '}';
        } else if (const Array* a = std::get_if<Array>(&value_)) {
            out += '[';
            bool first = true;
            for (const auto& v : *a) {
                if (!first) out += ',';
                first = false;
                v->write(out);
            }
            out += ']';
        }
    }
};

inline constexpr const char* kSchemaVersion = "1.0.0";

/// Standard report envelope shared by every command.
inline Json make_report(const std::string& command, Json inputs, Json results,
                        const std::vector<std::string>& warnings) {
    Json w = Json::array();
    for (const std::string& s : warnings) w.push(Json::string(s));
    Json report = Json::object();
    report.set("schema_version", Json::string(kSchemaVersion))
        .set("command", Json::string(command))
        .set("inputs", std::move(inputs))
        .set("results", std::move(results))
        .set("warnings", std::move(w));
    return report;
}

}  // namespace certiquad
