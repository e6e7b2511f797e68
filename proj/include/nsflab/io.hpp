#pragma once

#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nsflab {

// Fixed 17-significant-digit formatting; every number in CSV/JSON outputs
// goes through here so identical runs produce byte-identical files.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Minimal insertion-ordered JSON document for report files.
class JsonValue {
 public:
  JsonValue() : data_(nullptr) {}
  JsonValue(bool b) : data_(b) {}
  JsonValue(int v) : data_(static_cast<long long>(v)) {}
  JsonValue(long long v) : data_(v) {}
  JsonValue(double v) : data_(v) {}
  JsonValue(const char* s) : data_(std::string(s)) {}
  JsonValue(std::string s) : data_(std::move(s)) {}

  static JsonValue object() {
    JsonValue v;
    v.data_ = Object{};
    return v;
  }
  static JsonValue array() {
    JsonValue v;
    v.data_ = Array{};
    return v;
  }

  JsonValue& operator[](const std::string& key) {
    if (!std::holds_alternative<Object>(data_)) data_ = Object{};
    auto& obj = std::get<Object>(data_);
    for (auto& kv : obj)
      if (kv.first == key) return kv.second;
    obj.emplace_back(key, JsonValue());
    return obj.back().second;
  }

  void push_back(JsonValue v) {
    if (!std::holds_alternative<Array>(data_)) data_ = Array{};
    std::get<Array>(data_).push_back(std::move(v));
  }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    return out;
  }

 private:
  struct Object : std::vector<std::pair<std::string, JsonValue>> {};
  struct Array : std::vector<JsonValue> {};
  std::variant<std::nullptr_t, bool, long long, double, std::string, Array, Object> data_;

  static void escape(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    out += '"';
  }

  void write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string padc(static_cast<std::size_t>(indent) * depth, ' ');
    if (std::holds_alternative<std::nullptr_t>(data_)) {
      out += "null";
    } else if (std::holds_alternative<bool>(data_)) {
      out += std::get<bool>(data_) ? "true" : "false";
    } else if (std::holds_alternative<long long>(data_)) {
      out += std::to_string(std::get<long long>(data_));
    } else if (std::holds_alternative<double>(data_)) {
      out += fmt17(std::get<double>(data_));
    } else if (std::holds_alternative<std::string>(data_)) {
      escape(out, std::get<std::string>(data_));
    } else if (std::holds_alternative<Array>(data_)) {
      const auto& arr = std::get<Array>(data_);
      if (arr.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < arr.size(); ++i) {
        out += pad;
        arr[i].write(out, indent, depth + 1);
        if (i + 1 < arr.size()) out += ',';
        out += '\n';
      }
      out += padc + "]";
    } else {
      const auto& obj = std::get<Object>(data_);
      if (obj.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      for (std::size_t i = 0; i < obj.size(); ++i) {
        out += pad;
        escape(out, obj[i].first);
        out += ": ";
        obj[i].second.write(out, indent, depth + 1);
        if (i + 1 < obj.size()) out += ',';
        out += '\n';
      }
      out += padc + "}";
    }
  }
};

inline constexpr const char* kVersion = "nsflab 0.1.0";

}  // namespace nsflab
