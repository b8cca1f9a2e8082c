#include "reqconflict/record.hpp"

#include <cctype>
#include <istream>
#include <iterator>
#include <optional>
#include <sstream>

namespace reqconflict {
namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_agent(const std::optional<Entity>& agent) {
  return agent ? format_entity(*agent) : "none";
}

void write_tuple_fields(std::ostringstream& out, const std::string& indent, const std::optional<Entity>& agent,
                        const OperationSpec& op, const EntitySet& in, const EntitySet& outs,
                        const Restriction& r) {
  out << indent << "agent: " << format_agent(agent) << '\n';
  out << indent << "operation: " << format_operation(op) << '\n';
  out << indent << "input: " << format_entity_set(in) << '\n';
  out << indent << "output: " << format_entity_set(outs) << '\n';
  out << indent << "restriction: " << format_restriction(r) << '\n';
}

struct Tok {
  enum Kind { Word, String, Punct, End } kind;
  std::string text;
  std::size_t line;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Tok next() {
    skip();
    if (pos_ >= src_.size()) return {Tok::End, "", line_};
    const char c = src_[pos_];
    if (c == '{' || c == '}' || c == '[' || c == ']' || c == ',' || c == ':') {
      ++pos_;
      return {Tok::Punct, std::string(1, c), line_};
    }
    if (c == '"') {
      const auto start_line = line_;
      ++pos_;
      std::string s;
      while (true) {
        if (pos_ >= src_.size()) throw RecordError("unterminated string", start_line);
        char d = src_[pos_++];
        if (d == '"') break;
        if (d == '\n') ++line_;
        if (d == '\\') {
          if (pos_ >= src_.size()) throw RecordError("unterminated string", start_line);
          d = src_[pos_++];
        }
        s += d;
      }
      return {Tok::String, s, start_line};
    }
    std::string w;
    while (pos_ < src_.size()) {
      const char d = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '{' || d == '}' || d == '[' || d == ']' ||
          d == ',' || d == ':' || d == '"' || d == '#')
        break;
      w += d;
      ++pos_;
    }
    return {Tok::Word, w, line_};
  }

 private:
  void skip() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { advance(); }

  std::vector<Requirement> all() {
    std::vector<Requirement> out;
    while (cur_.kind != Tok::End) out.push_back(requirement());
    return out;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& what) const {
    const std::string found = cur_.kind == Tok::End ? "end of input" : "'" + cur_.text + "'";
    throw RecordError("expected " + what + ", found " + found, cur_.line);
  }

  void expect_word(std::string_view w) {
    if (cur_.kind != Tok::Word || cur_.text != w) fail("'" + std::string(w) + "'");
    advance();
  }

  void expect_punct(char p) {
    if (cur_.kind != Tok::Punct || cur_.text[0] != p) fail(std::string("'") + p + "'");
    advance();
  }

  bool at_punct(char p) const { return cur_.kind == Tok::Punct && cur_.text[0] == p; }

  void key(std::string_view name) {
    expect_word(name);
    expect_punct(':');
  }

  std::string string() {
    if (cur_.kind != Tok::String) fail("quoted string");
    auto s = cur_.text;
    advance();
    return s;
  }

  std::string word() {
    if (cur_.kind != Tok::Word) fail("keyword");
    auto s = cur_.text;
    advance();
    return s;
  }

  Entity entity() {
    const auto line = cur_.line;
    auto base = string();
    std::set<std::string> mods;
    expect_punct('[');
    while (!at_punct(']')) {
      mods.insert(string());
      if (!at_punct(']')) expect_punct(',');
    }
    expect_punct(']');
    try {
      return Entity(std::move(base), std::move(mods));
    } catch (const std::invalid_argument& e) {
      throw RecordError(e.what(), line);
    }
  }

  std::optional<Entity> agent() {
    if (cur_.kind == Tok::Word && cur_.text == "none") {
      advance();
      return std::nullopt;
    }
    return entity();
  }

  EntitySet entity_set() {
    EntitySet s;
    expect_punct('{');
    while (!at_punct('}')) {
      s.insert(entity());
      if (!at_punct('}')) expect_punct(',');
    }
    expect_punct('}');
    return s;
  }

  Restriction restriction() {
    Restriction r;
    expect_punct('{');
    while (!at_punct('}')) {
      add_constraint(r, string());
      if (!at_punct('}')) expect_punct(',');
    }
    expect_punct('}');
    return r;
  }

  OperationSpec operation() {
    const auto line = cur_.line;
    const auto mode = parse_mode(word());
    if (!mode) throw RecordError("operation mode must be DEFAULT, ABLE or NOT", line);
    OperationSpec op{*mode, string()};
    if (op.predicate.empty()) throw RecordError("empty predicate", line);
    return op;
  }

  Condition condition() {
    key("condition");
    Condition c;
    key("agent");
    c.agent = agent();
    key("operation");
    c.operation = operation();
    key("input");
    c.input = entity_set();
    key("output");
    c.output = entity_set();
    key("restriction");
    c.restriction = restriction();
    return c;
  }

  EventSpec event() {
    const auto line = cur_.line;
    const auto kind = word();
    if (kind == "ALL") return EventSpec::all();
    if (kind == "SINGLE") return EventSpec::single(condition());
    if (kind != "AND" && kind != "OR") throw RecordError("event must be ALL, SINGLE, AND or OR", line);
    std::vector<Condition> cs;
    while (cur_.kind == Tok::Word && cur_.text == "condition") cs.push_back(condition());
    if (cs.size() < 2) throw RecordError(kind + " event needs at least two conditions", line);
    return EventSpec::joined(std::move(cs), kind == "AND" ? Connective::AND : Connective::OR);
  }

  Requirement requirement() {
    expect_word("requirement");
    Requirement r;
    const auto line = cur_.line;
    r.id = string();
    if (!is_valid_id(r.id)) throw RecordError("invalid requirement id '" + r.id + "'", line);
    key("group");
    const auto gline = cur_.line;
    const auto g = word();
    try {
      std::size_t used = 0;
      r.group_id = std::stoi(g, &used);
      if (used != g.size() || r.group_id < 0) throw std::invalid_argument(g);
    } catch (const std::exception&) {
      throw RecordError("group must be a natural number", gline);
    }
    key("event");
    r.event = event();
    key("agent");
    r.agent = agent();
    key("operation");
    r.operation = operation();
    key("input");
    r.input = entity_set();
    key("output");
    r.output = entity_set();
    key("restriction");
    r.restriction = restriction();
    expect_word("end");
    return r;
  }

  Lexer lex_;
  Tok cur_{Tok::End, "", 1};
};

}  // namespace

std::string format_entity(const Entity& e) {
  std::string out = quote(e.base()) + " [";
  bool first = true;
  for (const auto& m : e.modifiers()) {
    if (!first) out += ", ";
    out += quote(m);
    first = false;
  }
  return out + "]";
}

std::string format_entity_set(const EntitySet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& e : s) {
    if (!first) out += ", ";
    out += format_entity(e);
    first = false;
  }
  return out + "}";
}

std::string format_operation(const OperationSpec& op) {
  return std::string(to_string(op.mode)) + " " + quote(op.predicate);
}

std::string format_restriction(const Restriction& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& c : r) {
    if (!first) out += ", ";
    out += quote(c);
    first = false;
  }
  return out + "}";
}

std::string serialize_requirement(const Requirement& req) {
  std::ostringstream out;
  out << "requirement " << quote(req.id) << '\n';
  out << "  group: " << req.group_id << '\n';
  if (req.event.is_all()) {
    out << "  event: ALL\n";
  } else {
    const char* label = req.event.conditions.size() == 1 ? "SINGLE"
                        : req.event.connective == Connective::OR ? "OR"
                                                                 : "AND";
    out << "  event: " << label << '\n';
    for (const auto& c : req.event.conditions) {
      out << "    condition:\n";
      write_tuple_fields(out, "      ", c.agent, c.operation, c.input, c.output, c.restriction);
    }
  }
  write_tuple_fields(out, "  ", req.agent, req.operation, req.input, req.output, req.restriction);
  out << "end\n";
  return out.str();
}

std::string serialize_requirements(const std::vector<Requirement>& reqs) {
  std::string out;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (i) out += '\n';
    out += serialize_requirement(reqs[i]);
  }
  return out;
}

std::vector<Requirement> parse_requirements(std::string_view text) { return Parser(text).all(); }

std::vector<Requirement> parse_requirements(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_requirements(std::string_view(text));
}

Requirement parse_requirement(std::string_view text) {
  auto all = parse_requirements(text);
  if (all.size() != 1) throw RecordError("expected exactly one record, found " + std::to_string(all.size()), 1);
  return std::move(all.front());
}

nlohmann::ordered_json to_json(const Entity& e) {
  nlohmann::ordered_json j;
  j["base"] = e.base();
  j["modifiers"] = e.modifiers();
  return j;
}

namespace {

nlohmann::ordered_json set_json(const EntitySet& s) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& e : s) j.push_back(to_json(e));
  return j;
}

nlohmann::ordered_json op_json(const OperationSpec& op) {
  return {{"mode", to_string(op.mode)}, {"predicate", op.predicate}};
}

nlohmann::ordered_json agent_json(const std::optional<Entity>& a) {
  return a ? to_json(*a) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const Requirement& req) {
  nlohmann::ordered_json j;
  j["id"] = req.id;
  j["groupId"] = req.group_id;
  nlohmann::ordered_json ev;
  ev["kind"] = req.event.is_all() ? "ALL" : "CONDITIONS";
  ev["connective"] = req.event.connective ? nlohmann::ordered_json(to_string(*req.event.connective))
                                          : nlohmann::ordered_json(nullptr);
  ev["conditions"] = nlohmann::ordered_json::array();
  for (const auto& c : req.event.conditions) {
    ev["conditions"].push_back({{"agent", agent_json(c.agent)},
                                {"operation", op_json(c.operation)},
                                {"input", set_json(c.input)},
                                {"output", set_json(c.output)},
                                {"restriction", c.restriction}});
  }
  j["event"] = ev;
  j["agent"] = agent_json(req.agent);
  j["operation"] = op_json(req.operation);
  j["input"] = set_json(req.input);
  j["output"] = set_json(req.output);
  j["restriction"] = req.restriction;
  return j;
}

}  // namespace reqconflict
