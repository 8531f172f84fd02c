#pragma once

// Shared helpers for the test binaries: fixture paths, the order-process net
// built in code, a process runner for the command-line tool, and a small
// JSON-Schema-subset checker used to validate emitted specifications.

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wn2declare/net.hpp"

namespace support {

inline std::string fixture(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << bytes;
}

// The order-handling net used throughout the tests, identical to the
// order.pnml fixture: a linear spine t_a; t_b; (t_c | t_d); t_e, a concurrent
// pair t_f || t_g joined by t_u, then a final choice between finishing with
// t_v and looping back to p1 through t_w.
inline wnd::WorkflowNet order_net() {
  std::vector<std::string> places = {"p0", "p1", "p2", "p3", "p4",
                                     "p5", "p6", "p7", "p8", "p9"};
  std::vector<std::string> transitions = {"t_a", "t_b", "t_c", "t_d", "t_e",
                                          "t_f", "t_g", "t_u", "t_v", "t_w"};
  std::vector<wnd::Arc> arcs = {
      {"p0", "t_a"}, {"t_a", "p1"}, {"p1", "t_b"}, {"t_b", "p2"},
      {"p2", "t_c"}, {"t_c", "p3"}, {"p2", "t_d"}, {"t_d", "p3"},
      {"p3", "t_e"}, {"t_e", "p4"}, {"t_e", "p5"}, {"p4", "t_f"},
      {"t_f", "p6"}, {"p5", "t_g"}, {"t_g", "p7"}, {"p6", "t_u"},
      {"p7", "t_u"}, {"t_u", "p8"}, {"p8", "t_v"}, {"t_v", "p9"},
      {"p8", "t_w"}, {"t_w", "p1"}};
  return wnd::make_net(std::move(places), std::move(transitions), std::move(arcs));
}

// Result of running the command-line tool.
struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs `tool <args>` through the shell, capturing stdout directly and stderr
// via a temporary file.  `args` must already be shell-safe (the tests only
// pass fixture paths and plain flags).  Only available to binaries compiled
// with TOOL_PATH.
#ifdef TOOL_PATH
inline RunResult run_tool(const std::string& args, const std::string& stdin_bytes = "") {
  static int counter = 0;
  const std::string err_path = "run_tool_stderr_" + std::to_string(counter++) + ".tmp";
  std::string cmd = std::string(TOOL_PATH) + " " + args + " 2>" + err_path;
  if (!stdin_bytes.empty()) {
    const std::string in_path = err_path + ".in";
    write_file(in_path, stdin_bytes);
    cmd += " <" + in_path;
  }
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  std::ifstream err_in(err_path, std::ios::binary);
  std::ostringstream ss;
  ss << err_in.rdbuf();
  r.err = ss.str();
  std::remove(err_path.c_str());
  if (!stdin_bytes.empty()) std::remove((err_path + ".in").c_str());
  return r;
}
#endif  // TOOL_PATH

inline bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// --- JSON Schema subset checker -------------------------------------------
//
// Validates a document against the subset of JSON Schema draft-07 that
// docs/declare-spec.schema.json actually uses: type, properties, required,
// additionalProperties (boolean), items, enum, const, minItems/maxItems,
// minLength, uniqueItems, definitions/$ref, and allOf/if/then/else.  Errors
// collect into a list of "<path>: <problem>" strings; empty means valid.

class SchemaChecker {
 public:
  explicit SchemaChecker(const nlohmann::json& root_schema) : root_(root_schema) {}

  std::vector<std::string> validate(const nlohmann::json& doc) {
    errors_.clear();
    check(doc, root_, "$");
    return errors_;
  }

 private:
  const nlohmann::json& root_;
  std::vector<std::string> errors_;

  void fail(const std::string& path, const std::string& what) {
    errors_.push_back(path + ": " + what);
  }

  const nlohmann::json& resolve(const nlohmann::json& schema) {
    if (schema.contains("$ref")) {
      const std::string ref = schema["$ref"].get<std::string>();
      const std::string prefix = "#/definitions/";
      if (ref.rfind(prefix, 0) != 0) throw std::runtime_error("unsupported $ref: " + ref);
      return root_.at("definitions").at(ref.substr(prefix.size()));
    }
    return schema;
  }

  static bool type_matches(const nlohmann::json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "number") return doc.is_number();
    if (type == "integer") return doc.is_number_integer();
    if (type == "boolean") return doc.is_boolean();
    if (type == "null") return doc.is_null();
    throw std::runtime_error("unsupported schema type: " + type);
  }

  // Validates without reporting; used for the "if" keyword.
  bool silently_valid(const nlohmann::json& doc, const nlohmann::json& schema,
                      const std::string& path) {
    std::vector<std::string> saved;
    saved.swap(errors_);
    check(doc, schema, path);
    const bool ok = errors_.empty();
    errors_ = std::move(saved);
    return ok;
  }

  void check(const nlohmann::json& doc, const nlohmann::json& schema_in,
             const std::string& path) {
    const nlohmann::json& schema = resolve(schema_in);

    if (schema.contains("type") && !type_matches(doc, schema["type"].get<std::string>()))
      return fail(path, "expected type " + schema["type"].get<std::string>());

    if (schema.contains("enum")) {
      bool hit = false;
      for (const auto& v : schema["enum"]) hit = hit || v == doc;
      if (!hit) fail(path, "value not in enum");
    }
    if (schema.contains("const") && schema["const"] != doc) fail(path, "value != const");

    if (doc.is_string() && schema.contains("minLength") &&
        doc.get<std::string>().size() < schema["minLength"].get<std::size_t>())
      fail(path, "string shorter than minLength");

    if (doc.is_object()) {
      if (schema.contains("required"))
        for (const auto& key : schema["required"])
          if (!doc.contains(key.get<std::string>()))
            fail(path, "missing required property " + key.get<std::string>());
      const bool sealed = schema.contains("additionalProperties") &&
                          schema["additionalProperties"].is_boolean() &&
                          !schema["additionalProperties"].get<bool>();
      for (const auto& [key, value] : doc.items()) {
        if (schema.contains("properties") && schema["properties"].contains(key))
          check(value, schema["properties"][key], path + "." + key);
        else if (sealed)
          fail(path, "unexpected property " + key);
      }
    }

    if (doc.is_array()) {
      if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>())
        fail(path, "fewer than minItems elements");
      if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<std::size_t>())
        fail(path, "more than maxItems elements");
      if (schema.contains("uniqueItems") && schema["uniqueItems"].get<bool>())
        for (std::size_t i = 0; i < doc.size(); ++i)
          for (std::size_t j = i + 1; j < doc.size(); ++j)
            if (doc[i] == doc[j]) fail(path, "duplicate array elements");
      if (schema.contains("items"))
        for (std::size_t i = 0; i < doc.size(); ++i)
          check(doc[i], schema["items"], path + "[" + std::to_string(i) + "]");
    }

    if (schema.contains("allOf"))
      for (const auto& sub : schema["allOf"]) check(doc, sub, path);

    if (schema.contains("if")) {
      if (silently_valid(doc, schema["if"], path)) {
        if (schema.contains("then")) check(doc, schema["then"], path);
      } else if (schema.contains("else")) {
        check(doc, schema["else"], path);
      }
    }
  }
};

inline std::vector<std::string> schema_errors(const std::string& doc_bytes,
                                              const std::string& schema_path) {
  const nlohmann::json doc = nlohmann::json::parse(doc_bytes);
  const nlohmann::json schema = nlohmann::json::parse(read_file(schema_path));
  return SchemaChecker(schema).validate(doc);
}

}  // namespace support
