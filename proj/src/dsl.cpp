#include "dcat/dsl.hpp"

#include <algorithm>
#include <sstream>

namespace dcat {

const JsonMembers& Json::members() const {
  require(is_object(), Errc::schema_error, "expected an object");
  return std::get<JsonMembers>(value);
}
const JsonArray& Json::array() const {
  require(is_array(), Errc::schema_error, "expected an array");
  return std::get<JsonArray>(value);
}
const std::string& Json::str() const {
  require(is_string(), Errc::schema_error, "expected a string");
  return std::get<std::string>(value);
}
long long Json::num() const {
  require(is_number(), Errc::schema_error, "expected a number");
  return std::get<long long>(value);
}
const Json* Json::find(const std::string& key) const {
  for (const auto& [k, v] : members())
    if (k == key) return &v;
  return nullptr;
}
const Json& Json::at(const std::string& key) const {
  const Json* v = find(key);
  require(v != nullptr, Errc::schema_error, "missing field '" + key + "'");
  return *v;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class JsonParser {
 public:
  explicit JsonParser(const std::string& text) : text_(text) {}

  Json parse() {
    skip_ws();
    Json v = parse_value();
    skip_ws();
    if (pos_ != text_.size()) error("end of input");
    return v;
  }

 private:
  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  [[noreturn]] void error(const std::string& expected) {
    fail(Errc::syntax_error, "line " + std::to_string(line_) + ", column " +
                                 std::to_string(col_) + ": expected " + expected);
  }

  char peek() { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
        advance();
      else
        break;
    }
  }

  void expect(char c, const std::string& what) {
    if (peek() != c) error(what);
    advance();
  }

  Json parse_value() {
    switch (peek()) {
      case '{': return parse_object();
      case '[': return parse_array();
      case '"': return Json(parse_string());
      case 't':
        parse_literal("true");
        return Json(true);
      case 'f':
        parse_literal("false");
        return Json(false);
      default:
        if (peek() == '-' || (peek() >= '0' && peek() <= '9')) return parse_number();
        error("one of '{', '[', '\"', number, 'true', 'false'");
    }
  }

  void parse_literal(const char* lit) {
    for (const char* p = lit; *p; ++p) {
      if (peek() != *p) error(std::string("'") + lit + "'");
      advance();
    }
  }

  Json parse_number() {
    std::string digits;
    if (peek() == '-') digits.push_back(advance());
    if (peek() < '0' || peek() > '9') error("digit");
    while (peek() >= '0' && peek() <= '9') digits.push_back(advance());
    return Json(static_cast<long long>(std::stoll(digits)));
  }

  std::string parse_string() {
    expect('"', "'\"'");
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) error("closing '\"'");
      char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) error("escape character");
        char e = advance();
        switch (e) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case '/': out.push_back('/'); break;
          case 'b': out.push_back('\b'); break;
          case 'f': out.push_back('\f'); break;
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 't': out.push_back('\t'); break;
          case 'u': {
            int code = 0;
            for (int i = 0; i < 4; ++i) {
              if (pos_ >= text_.size()) error("four hex digits");
              char h = advance();
              code <<= 4;
              if (h >= '0' && h <= '9') code += h - '0';
              else if (h >= 'a' && h <= 'f') code += h - 'a' + 10;
              else if (h >= 'A' && h <= 'F') code += h - 'A' + 10;
              else error("hex digit");
            }
            // The subset sticks to the basic plane, encoded as UTF-8.
            if (code < 0x80) {
              out.push_back(static_cast<char>(code));
            } else if (code < 0x800) {
              out.push_back(static_cast<char>(0xC0 | (code >> 6)));
              out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
            } else {
              out.push_back(static_cast<char>(0xE0 | (code >> 12)));
              out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
              out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
            }
            break;
          }
          default: error("valid escape");
        }
      } else if (static_cast<unsigned char>(c) < 0x20) {
        error("no control characters inside strings");
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  Json parse_array() {
    expect('[', "'['");
    JsonArray out;
    skip_ws();
    if (peek() == ']') {
      advance();
      return Json(out);
    }
    while (true) {
      skip_ws();
      out.push_back(parse_value());
      skip_ws();
      if (peek() == ',') {
        advance();
        continue;
      }
      expect(']', "',' or ']'");
      break;
    }
    return Json(out);
  }

  Json parse_object() {
    expect('{', "'{'");
    JsonMembers out;
    skip_ws();
    if (peek() == '}') {
      advance();
      return Json(out);
    }
    while (true) {
      skip_ws();
      std::string key = parse_string();
      skip_ws();
      expect(':', "':'");
      skip_ws();
      out.emplace_back(std::move(key), parse_value());
      skip_ws();
      if (peek() == ',') {
        advance();
        continue;
      }
      expect('}', "',' or '}'");
      break;
    }
    return Json(out);
  }
};

void print_string(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void print_value(std::string& out, const Json& v, int indent) {
  std::string pad(indent * 2, ' ');
  std::string pad2((indent + 1) * 2, ' ');
  if (v.is_object()) {
    const auto& m = v.members();
    if (m.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    for (size_t i = 0; i < m.size(); ++i) {
      out += pad2;
      print_string(out, m[i].first);
      out += ": ";
      print_value(out, m[i].second, indent + 1);
      if (i + 1 < m.size()) out += ",";
      out += "\n";
    }
    out += pad + "}";
  } else if (v.is_array()) {
    const auto& a = v.array();
    if (a.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (size_t i = 0; i < a.size(); ++i) {
      out += pad2;
      print_value(out, a[i], indent + 1);
      if (i + 1 < a.size()) out += ",";
      out += "\n";
    }
    out += pad + "]";
  } else if (v.is_string()) {
    print_string(out, v.str());
  } else if (v.is_number()) {
    out += std::to_string(v.num());
  } else {
    out += std::get<bool>(v.value) ? "true" : "false";
  }
}

}  // namespace

Json parse_json(const std::string& text) { return JsonParser(text).parse(); }

std::string print_json(const Json& v) {
  std::string out;
  print_value(out, v, 0);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Schema layer

bool TheoryEntry::operator==(const TheoryEntry& o) const {
  // Structural comparison through the word encodings.
  auto enc = [](const TheoryPresentation& t) {
    std::string s;
    for (const auto& g : t.object_generators) s += g + ";";
    for (const auto& g : t.proarrow_generators)
      s += g.name + ":" + g.src.enc() + ">" + g.dst.enc() + ";";
    for (const auto& g : t.cell_generators)
      s += g.name + ":" + g.src->enc() + ">" + g.dst->enc() + ";";
    for (const auto& e : t.equations)
      s += e.family + "." + e.name + ":" + e.lhs->enc() + "=" + e.rhs->enc() + ";";
    return s;
  };
  return enc(presentation) == enc(o.presentation);
}

const EntryValue& Document::entry(const std::string& name) const {
  for (const auto& [n, v] : entries)
    if (n == name) return v;
  fail(Errc::reference_error, "no entry named '" + name + "'");
}

void Document::add(const std::string& name, EntryValue value) {
  for (const auto& [n, v] : entries)
    require(n != name, Errc::schema_error, "duplicate entry name '" + name + "'");
  auto at = std::lower_bound(entries.begin(), entries.end(), name,
                             [](const auto& e, const std::string& n) {
                               return e.first < n;
                             });
  entries.insert(at, {name, std::move(value)});
}

namespace {

Json table_to_json(const std::map<std::string, std::string>& t) {
  JsonMembers m;
  for (const auto& [k, v] : t) m.emplace_back(k, Json(v));
  return Json(m);
}

std::map<std::string, std::string> table_from_json(const Json& j) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.members()) out[k] = v.str();
  return out;
}

Json object_word_to_json(const ObjectWord& w) {
  JsonArray a;
  for (const auto& f : w.factors) a.push_back(Json(f));
  return Json(a);
}

ObjectWord object_word_from_json(const Json& j) {
  ObjectWord out;
  for (const auto& f : j.array()) out.factors.push_back(f.str());
  return out;
}

Json index_fn_to_json(const FinFunction& f) {
  JsonArray a;
  for (int v : f.table) a.push_back(Json(static_cast<long long>(v)));
  return Json(a);
}

FinFunction index_fn_from_json(const Json& j, int cod_size) {
  std::vector<int> t;
  for (const auto& v : j.array()) t.push_back(static_cast<int>(v.num()));
  return FinFunction(canonical_index_set(static_cast<int>(t.size())),
                     canonical_index_set(cod_size), t);
}

}  // namespace

Json pro_word_to_json(const ProWordPtr& w) {
  JsonMembers m;
  switch (w->kind) {
    case ProWord::Kind::id:
      m.emplace_back("op", Json("id"));
      m.emplace_back("object", object_word_to_json(w->object));
      break;
    case ProWord::Kind::gen:
      m.emplace_back("op", Json("gen"));
      m.emplace_back("name", Json(w->name));
      break;
    case ProWord::Kind::comp: {
      m.emplace_back("op", Json("comp"));
      JsonArray parts;
      for (const auto& p : w->parts) parts.push_back(pro_word_to_json(p));
      m.emplace_back("parts", Json(parts));
      break;
    }
    case ProWord::Kind::prod: {
      m.emplace_back("op", Json("prod"));
      m.emplace_back("left", index_fn_to_json(w->indexing.left));
      m.emplace_back("right", index_fn_to_json(w->indexing.right));
      JsonArray src, dst, parts;
      for (const auto& f : w->src_family) src.push_back(object_word_to_json(f));
      for (const auto& f : w->dst_family) dst.push_back(object_word_to_json(f));
      for (const auto& p : w->parts) parts.push_back(pro_word_to_json(p));
      m.emplace_back("src", Json(src));
      m.emplace_back("dst", Json(dst));
      m.emplace_back("parts", Json(parts));
      break;
    }
    case ProWord::Kind::companion: {
      m.emplace_back("op", Json("companion"));
      m.emplace_back("sigma", index_fn_to_json(w->sigma));
      JsonArray src;
      for (const auto& f : w->src_family) src.push_back(object_word_to_json(f));
      m.emplace_back("src", Json(src));
      break;
    }
  }
  return Json(m);
}

ProWordPtr pro_word_from_json(const Json& j) {
  const std::string& op = j.at("op").str();
  if (op == "id") return word_id(object_word_from_json(j.at("object")));
  if (op == "gen") return word_gen(j.at("name").str());
  if (op == "comp") {
    const auto& parts = j.at("parts").array();
    require(parts.size() == 2, Errc::schema_error, "comp takes two parts");
    return word_comp(pro_word_from_json(parts[0]), pro_word_from_json(parts[1]));
  }
  if (op == "prod") {
    std::vector<ObjectWord> src, dst;
    for (const auto& f : j.at("src").array()) src.push_back(object_word_from_json(f));
    for (const auto& f : j.at("dst").array()) dst.push_back(object_word_from_json(f));
    FinFunction left = index_fn_from_json(j.at("left"), static_cast<int>(src.size()));
    FinFunction right = index_fn_from_json(j.at("right"), static_cast<int>(dst.size()));
    std::vector<ProWordPtr> parts;
    for (const auto& p : j.at("parts").array()) parts.push_back(pro_word_from_json(p));
    return word_prod(SetSpan(left, right), src, dst, parts);
  }
  if (op == "companion") {
    std::vector<ObjectWord> src;
    for (const auto& f : j.at("src").array()) src.push_back(object_word_from_json(f));
    FinFunction sigma = index_fn_from_json(j.at("sigma"), static_cast<int>(src.size()));
    return word_companion(sigma, src);
  }
  fail(Errc::schema_error, "unknown proarrow word op '" + op + "'");
}

Json cell_word_to_json(const CellWordPtr& w) {
  JsonMembers m;
  switch (w->kind) {
    case CellWord::Kind::gen:
      m.emplace_back("op", Json("cgen"));
      m.emplace_back("name", Json(w->name));
      break;
    case CellWord::Kind::id_pro:
      m.emplace_back("op", Json("cid"));
      m.emplace_back("pro", pro_word_to_json(w->pro));
      break;
    case CellWord::Kind::vert:
    case CellWord::Kind::ext: {
      m.emplace_back("op", Json(w->kind == CellWord::Kind::vert ? "vert" : "ext"));
      JsonArray parts;
      for (const auto& p : w->parts) parts.push_back(cell_word_to_json(p));
      m.emplace_back("parts", Json(parts));
      break;
    }
    case CellWord::Kind::proj:
      m.emplace_back("op", Json("proj"));
      m.emplace_back("prod", pro_word_to_json(w->pro));
      m.emplace_back("index", Json(static_cast<long long>(w->index)));
      break;
    case CellWord::Kind::pair: {
      m.emplace_back("op", Json("pair"));
      m.emplace_back("prod", pro_word_to_json(w->pro));
      if (w->source) m.emplace_back("source", pro_word_to_json(w->source));
      JsonArray parts;
      for (const auto& p : w->parts) parts.push_back(cell_word_to_json(p));
      m.emplace_back("parts", Json(parts));
      break;
    }
    case CellWord::Kind::comp_unit:
    case CellWord::Kind::comp_counit: {
      m.emplace_back("op",
                     Json(w->kind == CellWord::Kind::comp_unit ? "unit" : "counit"));
      m.emplace_back("sigma", index_fn_to_json(w->sigma));
      JsonArray src;
      for (const auto& f : w->src_family) src.push_back(object_word_to_json(f));
      m.emplace_back("src", Json(src));
      break;
    }
  }
  return Json(m);
}

CellWordPtr cell_word_from_json(const Json& j) {
  const std::string& op = j.at("op").str();
  if (op == "cgen") return cell_gen(j.at("name").str());
  if (op == "cid") return cell_id(pro_word_from_json(j.at("pro")));
  if (op == "vert" || op == "ext") {
    const auto& parts = j.at("parts").array();
    require(parts.size() == 2, Errc::schema_error, op + " takes two parts");
    auto a = cell_word_from_json(parts[0]);
    auto b = cell_word_from_json(parts[1]);
    return op == "vert" ? cell_vert(a, b) : cell_ext(a, b);
  }
  if (op == "proj")
    return cell_proj(pro_word_from_json(j.at("prod")),
                     static_cast<int>(j.at("index").num()));
  if (op == "pair") {
    ProWordPtr prod = pro_word_from_json(j.at("prod"));
    ProWordPtr source = j.find("source") ? pro_word_from_json(j.at("source")) : nullptr;
    std::vector<CellWordPtr> parts;
    for (const auto& p : j.at("parts").array()) parts.push_back(cell_word_from_json(p));
    return cell_pair(prod, source, parts);
  }
  if (op == "unit" || op == "counit") {
    std::vector<ObjectWord> src;
    for (const auto& f : j.at("src").array()) src.push_back(object_word_from_json(f));
    FinFunction sigma = index_fn_from_json(j.at("sigma"), static_cast<int>(src.size()));
    return op == "unit" ? cell_comp_unit(sigma, src) : cell_comp_counit(sigma, src);
  }
  fail(Errc::schema_error, "unknown cell word op '" + op + "'");
}

namespace {

Json entry_to_json(const EntryValue& e) {
  JsonMembers m;
  if (auto* fs = std::get_if<FinSetEntry>(&e)) {
    m.emplace_back("kind", Json("finset"));
    JsonArray a;
    for (const auto& el : fs->elements) a.push_back(Json(el));
    m.emplace_back("elements", Json(a));
  } else if (auto* fn = std::get_if<FunctionEntry>(&e)) {
    m.emplace_back("kind", Json("function"));
    m.emplace_back("dom", Json(fn->dom));
    m.emplace_back("cod", Json(fn->cod));
    m.emplace_back("table", table_to_json(fn->table));
  } else if (auto* sp = std::get_if<SpanEntry>(&e)) {
    m.emplace_back("kind", Json("span"));
    m.emplace_back("left", Json(sp->left));
    m.emplace_back("right", Json(sp->right));
  } else if (auto* fo = std::get_if<FamilyObjectEntry>(&e)) {
    m.emplace_back("kind", Json("family-object"));
    m.emplace_back("indexing", Json(fo->indexing));
    m.emplace_back("assignment", table_to_json(fo->assignment));
  } else if (auto* fp = std::get_if<FamilyProarrowEntry>(&e)) {
    m.emplace_back("kind", Json("family-proarrow"));
    m.emplace_back("src", Json(fp->src));
    m.emplace_back("dst", Json(fp->dst));
    m.emplace_back("span", Json(fp->span));
    m.emplace_back("components", table_to_json(fp->components));
  } else if (auto* th = std::get_if<TheoryEntry>(&e)) {
    m.emplace_back("kind", Json("theory"));
    JsonArray obs;
    for (const auto& g : th->presentation.object_generators) obs.push_back(Json(g));
    m.emplace_back("objects", Json(obs));
    JsonArray pros;
    for (const auto& g : th->presentation.proarrow_generators) {
      JsonMembers gm;
      gm.emplace_back("name", Json(g.name));
      gm.emplace_back("src", object_word_to_json(g.src));
      gm.emplace_back("dst", object_word_to_json(g.dst));
      pros.push_back(Json(gm));
    }
    m.emplace_back("proarrows", Json(pros));
    JsonArray cells;
    for (const auto& g : th->presentation.cell_generators) {
      JsonMembers gm;
      gm.emplace_back("name", Json(g.name));
      gm.emplace_back("src", pro_word_to_json(g.src));
      gm.emplace_back("dst", pro_word_to_json(g.dst));
      cells.push_back(Json(gm));
    }
    m.emplace_back("cells", Json(cells));
    JsonArray eqs;
    for (const auto& q : th->presentation.equations) {
      JsonMembers qm;
      qm.emplace_back("family", Json(q.family));
      qm.emplace_back("name", Json(q.name));
      qm.emplace_back("lhs", cell_word_to_json(q.lhs));
      qm.emplace_back("rhs", cell_word_to_json(q.rhs));
      eqs.push_back(Json(qm));
    }
    m.emplace_back("equations", Json(eqs));
  } else if (auto* mo = std::get_if<ModelEntry>(&e)) {
    m.emplace_back("kind", Json("model"));
    m.emplace_back("theory", Json(mo->theory));
    m.emplace_back("objects", table_to_json(mo->objects));
    m.emplace_back("atomics", table_to_json(mo->atomics));
    JsonMembers cells;
    for (const auto& [k, t] : mo->cells) cells.emplace_back(k, table_to_json(t));
    m.emplace_back("cells", Json(cells));
    JsonArray lax;
    for (const auto& [l, r, t] : mo->laxators) {
      JsonMembers lm;
      lm.emplace_back("lhs", Json(l));
      lm.emplace_back("rhs", Json(r));
      lm.emplace_back("table", table_to_json(t));
      lax.push_back(Json(lm));
    }
    m.emplace_back("laxators", Json(lax));
    JsonMembers unit;
    for (const auto& [k, t] : mo->unitors) unit.emplace_back(k, table_to_json(t));
    m.emplace_back("unitors", Json(unit));
    JsonArray ovs;
    for (const auto& [l, r, t] : mo->overrides) {
      JsonMembers om;
      om.emplace_back("lhs", l);
      om.emplace_back("rhs", r);
      om.emplace_back("table", table_to_json(t));
      ovs.push_back(Json(om));
    }
    m.emplace_back("overrides", Json(ovs));
  } else if (auto* tr = std::get_if<TransformationEntry>(&e)) {
    m.emplace_back("kind", Json("transformation"));
    m.emplace_back("source", Json(tr->source));
    m.emplace_back("target", Json(tr->target));
    JsonMembers comp;
    for (const auto& [k, t] : tr->components) comp.emplace_back(k, table_to_json(t));
    m.emplace_back("components", Json(comp));
    JsonMembers nat;
    for (const auto& [k, t] : tr->naturality) nat.emplace_back(k, table_to_json(t));
    m.emplace_back("naturality", Json(nat));
  } else if (auto* rp = std::get_if<ReportEntry>(&e)) {
    m.emplace_back("kind", Json("report"));
    m.emplace_back("verdict", Json(rp->verdict));
    m.emplace_back("cases", Json(rp->cases));
    JsonArray fails;
    for (const auto& f : rp->failures) fails.push_back(Json(f));
    m.emplace_back("failures", Json(fails));
  }
  return Json(m);
}

EntryValue entry_from_json(const std::string& name, const Json& j) {
  const std::string& kind = j.at("kind").str();
  auto schema = [&](const std::string& field) -> std::string {
    return "entry '" + name + "', field '" + field + "'";
  };
  (void)schema;
  if (kind == "finset") {
    FinSetEntry out;
    for (const auto& el : j.at("elements").array()) out.elements.push_back(el.str());
    return out;
  }
  if (kind == "function") {
    FunctionEntry out;
    out.dom = j.at("dom").str();
    out.cod = j.at("cod").str();
    out.table = table_from_json(j.at("table"));
    return out;
  }
  if (kind == "span") {
    SpanEntry out;
    out.left = j.at("left").str();
    out.right = j.at("right").str();
    return out;
  }
  if (kind == "family-object") {
    FamilyObjectEntry out;
    out.indexing = j.at("indexing").str();
    out.assignment = table_from_json(j.at("assignment"));
    return out;
  }
  if (kind == "family-proarrow") {
    FamilyProarrowEntry out;
    out.src = j.at("src").str();
    out.dst = j.at("dst").str();
    out.span = j.at("span").str();
    out.components = table_from_json(j.at("components"));
    return out;
  }
  if (kind == "theory") {
    TheoryEntry out;
    for (const auto& g : j.at("objects").array())
      out.presentation.object_generators.push_back(g.str());
    for (const auto& g : j.at("proarrows").array())
      out.presentation.proarrow_generators.push_back(
          {g.at("name").str(), object_word_from_json(g.at("src")),
           object_word_from_json(g.at("dst"))});
    for (const auto& g : j.at("cells").array())
      out.presentation.cell_generators.push_back({g.at("name").str(),
                                                  pro_word_from_json(g.at("src")),
                                                  pro_word_from_json(g.at("dst"))});
    for (const auto& q : j.at("equations").array())
      out.presentation.equations.push_back(
          {q.at("family").str(), q.at("name").str(),
           cell_word_from_json(q.at("lhs")), cell_word_from_json(q.at("rhs"))});
    return out;
  }
  if (kind == "model") {
    ModelEntry out;
    out.theory = j.at("theory").str();
    out.objects = table_from_json(j.at("objects"));
    out.atomics = table_from_json(j.at("atomics"));
    for (const auto& [k, v] : j.at("cells").members())
      out.cells[k] = table_from_json(v);
    for (const auto& l : j.at("laxators").array())
      out.laxators.emplace_back(l.at("lhs").str(), l.at("rhs").str(),
                                table_from_json(l.at("table")));
    for (const auto& [k, v] : j.at("unitors").members())
      out.unitors[k] = table_from_json(v);
    if (const Json* ovs = j.find("overrides"))
      for (const auto& o : ovs->array())
        out.overrides.emplace_back(o.at("lhs"), o.at("rhs"),
                                   table_from_json(o.at("table")));
    return out;
  }
  if (kind == "transformation") {
    TransformationEntry out;
    out.source = j.at("source").str();
    out.target = j.at("target").str();
    for (const auto& [k, v] : j.at("components").members())
      out.components[k] = table_from_json(v);
    for (const auto& [k, v] : j.at("naturality").members())
      out.naturality[k] = table_from_json(v);
    return out;
  }
  if (kind == "report") {
    ReportEntry out;
    out.verdict = j.at("verdict").str();
    out.cases = j.at("cases").num();
    for (const auto& f : j.at("failures").array()) out.failures.push_back(f.str());
    return out;
  }
  fail(Errc::schema_error, "entry '" + name + "': unknown kind '" + kind + "'");
}

}  // namespace

Document parse_document(const std::string& text) {
  Json j = parse_json(text);
  Document out;
  out.version = j.at("version").str();
  require(out.version == "1", Errc::schema_error, "unsupported format version");
  for (const auto& [name, v] : j.at("entries").members())
    out.add(name, entry_from_json(name, v));
  // Cross-reference resolution is validated eagerly so malformed documents
  // fail at parse time with a named diagnostic.
  for (const auto& [name, v] : out.entries) {
    if (std::holds_alternative<FunctionEntry>(v)) doc_function(out, name);
    else if (std::holds_alternative<SpanEntry>(v)) doc_span(out, name);
    else if (std::holds_alternative<FamilyObjectEntry>(v)) doc_family_object(out, name);
    else if (std::holds_alternative<FamilyProarrowEntry>(v))
      doc_family_proarrow(out, name);
    else if (std::holds_alternative<ModelEntry>(v)) doc_model(out, name);
    else if (std::holds_alternative<TransformationEntry>(v))
      doc_transformation(out, name);
  }
  return out;
}

std::string print_document(const Document& d) {
  JsonMembers top;
  top.emplace_back("version", Json(d.version));
  JsonMembers entries;
  for (const auto& [name, v] : d.entries) entries.emplace_back(name, entry_to_json(v));
  top.emplace_back("entries", Json(entries));
  return print_json(Json(top));
}

// ---------------------------------------------------------------------------
// Resolution

FinSet doc_finset(const Document& d, const std::string& name) {
  const auto* e = std::get_if<FinSetEntry>(&d.entry(name));
  require(e != nullptr, Errc::reference_error, "'" + name + "' is not a finset");
  return FinSet(name, e->elements);
}

FinFunction doc_function(const Document& d, const std::string& name) {
  const auto* e = std::get_if<FunctionEntry>(&d.entry(name));
  require(e != nullptr, Errc::reference_error, "'" + name + "' is not a function");
  return FinFunction::from_labels(doc_finset(d, e->dom), doc_finset(d, e->cod),
                                  e->table);
}

SetSpan doc_span(const Document& d, const std::string& name) {
  const auto* e = std::get_if<SpanEntry>(&d.entry(name));
  require(e != nullptr, Errc::reference_error, "'" + name + "' is not a span");
  return SetSpan(doc_function(d, e->left), doc_function(d, e->right));
}

FamObject doc_family_object(const Document& d, const std::string& name) {
  const auto* e = std::get_if<FamilyObjectEntry>(&d.entry(name));
  require(e != nullptr, Errc::reference_error, "'" + name + "' is not a family-object");
  FinSet ix = doc_finset(d, e->indexing);
  FamObject out{ix, {}};
  for (const auto& label : ix.elements()) {
    auto it = e->assignment.find(label);
    require(it != e->assignment.end(), Errc::schema_error,
            "entry '" + name + "': assignment missing index '" + label + "'");
    out.assignment.push_back(SpanDouble::ob(doc_finset(d, it->second)));
  }
  return out;
}

FamProarrow doc_family_proarrow(const Document& d, const std::string& name) {
  const auto* e = std::get_if<FamilyProarrowEntry>(&d.entry(name));
  require(e != nullptr, Errc::reference_error,
          "'" + name + "' is not a family-proarrow");
  FamObject src = doc_family_object(d, e->src);
  FamObject dst = doc_family_object(d, e->dst);
  SetSpan span = doc_span(d, e->span);
  require(span.left_foot == src.indexing && span.right_foot == dst.indexing,
          Errc::schema_error, "entry '" + name + "': span feet must be the indexing sets");
  FamProarrow out{src, dst, span, {}};
  for (int a = 0; a < span.apex.size(); ++a) {
    const std::string& label = span.apex.elements()[a];
    auto it = e->components.find(label);
    require(it != e->components.end(), Errc::schema_error,
            "entry '" + name + "': components missing '" + label + "'");
    SetSpan comp = doc_span(d, it->second);
    require(comp.left_foot == SpanDouble::ob_of(src.assignment[span.left.table[a]]) &&
                comp.right_foot == SpanDouble::ob_of(dst.assignment[span.right.table[a]]),
            Errc::schema_error, "entry '" + name + "': component frame at '" + label + "'");
    out.components.push_back(SpanDouble::pro(comp));
  }
  return out;
}

TheoryPresentation doc_theory(const Document& d, const std::string& name) {
  const auto* e = std::get_if<TheoryEntry>(&d.entry(name));
  require(e != nullptr, Errc::reference_error, "'" + name + "' is not a theory");
  return e->presentation;
}

namespace {

FinFunction resolve_table(const std::map<std::string, std::string>& table,
                          const FinSet& dom, const FinSet& cod,
                          const std::string& what) {
  std::vector<int> t;
  t.reserve(dom.size());
  for (const auto& label : dom.elements()) {
    auto it = table.find(label);
    require(it != table.end(), Errc::schema_error,
            what + ": table missing '" + label + "'");
    int v = cod.index_of(it->second);
    require(v >= 0, Errc::schema_error,
            what + ": value '" + it->second + "' not in the codomain");
    t.push_back(v);
  }
  return FinFunction(dom, cod, t);
}

}  // namespace

ModelData doc_model(const Document& d, const std::string& name) {
  const auto* e = std::get_if<ModelEntry>(&d.entry(name));
  require(e != nullptr, Errc::reference_error, "'" + name + "' is not a model");
  ModelData out;
  out.theory = doc_theory(d, e->theory);
  for (const auto& [gen, fsname] : e->objects)
    out.on_objects[gen] = doc_finset(d, fsname);
  for (const auto& [key, spname] : e->atomics)
    out.on_atomic[key] = doc_span(d, spname);
  ModelEval ev(out);
  for (const auto& [l, r, table] : e->laxators) {
    // Atomic keys have the form id:<gen> or gen:<name>.
    auto word_of = [&](const std::string& key) -> ProWordPtr {
      if (key.rfind("id:", 0) == 0) return word_id(ObjectWord{{key.substr(3)}});
      require(key.rfind("gen:", 0) == 0, Errc::schema_error,
              "entry '" + name + "': bad atomic key '" + key + "'");
      return word_gen(key.substr(4));
    };
    ProWordPtr lw = word_of(l), rw = word_of(r);
    SetSpan dom = span_compose(ev.eval_pro(lw), ev.eval_pro(rw));
    SetSpan cod = ev.eval_pro([&] {
      // canonical collapsed composite
      bool lid = lw->kind == ProWord::Kind::id;
      bool rid = rw->kind == ProWord::Kind::id;
      if (lid) return rid ? lw : rw;
      return rid ? lw : word_comp(lw, rw);
    }());
    out.laxators[{l, r}] =
        resolve_table(table, dom.apex, cod.apex, "entry '" + name + "' laxator");
  }
  for (const auto& [gen, table] : e->unitors) {
    FinSet dom = out.on_objects.at(gen);
    SetSpan cod = ev.eval_pro(word_id(ObjectWord{{gen}}));
    out.unitors[gen] =
        resolve_table(table, dom, cod.apex, "entry '" + name + "' unitor");
  }
  for (const auto& [gen, table] : e->cells) {
    const auto& cg = out.theory.cell_generator(gen);
    SetSpan src = ev.eval_pro(cg.src);
    SetSpan dst = ev.eval_pro(cg.dst);
    out.on_cells[gen] =
        resolve_table(table, src.apex, dst.apex, "entry '" + name + "' cell " + gen);
  }
  for (const auto& [lj, rj, table] : e->overrides) {
    ProWordPtr lw = pro_word_from_json(lj);
    ProWordPtr rw = pro_word_from_json(rj);
    SpanCell derived = ev.laxator(lw, rw);
    out.laxator_overrides.push_back(
        {lw, rw,
         resolve_table(table, derived.apex_map.dom, derived.apex_map.cod,
                       "entry '" + name + "' override")});
  }
  return out;
}

TransformationData doc_transformation(const Document& d, const std::string& name) {
  const auto* e = std::get_if<TransformationEntry>(&d.entry(name));
  require(e != nullptr, Errc::reference_error,
          "'" + name + "' is not a transformation");
  TransformationData out{doc_model(d, e->source), doc_model(d, e->target), {}, {}};
  ModelEval mf(out.source);
  ModelEval mg(out.target);
  for (const auto& [gen, table] : e->components)
    out.components[gen] =
        resolve_table(table, out.source.on_objects.at(gen),
                      out.target.on_objects.at(gen), "transformation component");
  for (const auto& [key, table] : e->naturality) {
    const SetSpan& src = out.source.on_atomic.at(key);
    const SetSpan& dst = out.target.on_atomic.at(key);
    out.naturality[key] =
        resolve_table(table, src.apex, dst.apex, "transformation naturality");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builders

void put_finset(Document& d, const std::string& name, const FinSet& s) {
  d.add(name, FinSetEntry{s.elements()});
}

void put_function(Document& d, const std::string& name, const FinFunction& f,
                  const std::string& dom_name, const std::string& cod_name) {
  FunctionEntry e;
  e.dom = dom_name;
  e.cod = cod_name;
  for (size_t i = 0; i < f.table.size(); ++i)
    e.table[f.dom.elements()[i]] = f.cod.elements()[f.table[i]];
  d.add(name, e);
}

void put_span(Document& d, const std::string& name, const SetSpan& s) {
  put_finset(d, name + ".apex", s.apex);
  std::string srcn = name + ".src";
  std::string dstn = s.left_foot == s.right_foot ? srcn : name + ".dst";
  put_finset(d, srcn, s.left_foot);
  if (dstn != srcn) put_finset(d, dstn, s.right_foot);
  FinFunction left(FinSet(name + ".apex", s.apex.elements()),
                   FinSet(srcn, s.left_foot.elements()), s.left.table);
  FinFunction right(FinSet(name + ".apex", s.apex.elements()),
                    FinSet(dstn, s.right_foot.elements()), s.right.table);
  put_function(d, name + ".left", left, name + ".apex", srcn);
  put_function(d, name + ".right", right, name + ".apex", dstn);
  d.add(name, SpanEntry{name + ".left", name + ".right"});
}

void put_family_object(Document& d, const std::string& name, const FamObject& x) {
  put_finset(d, name + ".indexing", x.indexing);
  FamilyObjectEntry e;
  e.indexing = name + ".indexing";
  for (int i = 0; i < x.indexing.size(); ++i) {
    std::string sub = name + ".at." + x.indexing.elements()[i];
    put_finset(d, sub, SpanDouble::ob_of(x.assignment[i]));
    e.assignment[x.indexing.elements()[i]] = sub;
  }
  d.add(name, e);
}

void put_family_proarrow(Document& d, const std::string& name, const FamProarrow& m) {
  put_family_object(d, name + ".srcfam", m.src);
  put_family_object(d, name + ".dstfam", m.dst);
  put_family_proarrow_between(d, name, m, name + ".srcfam", name + ".dstfam");
}

void put_family_proarrow_between(Document& d, const std::string& name,
                                 const FamProarrow& m, const std::string& src_name,
                                 const std::string& dst_name) {
  // The indexing span reuses the family objects' indexing sets.
  FinFunction left(FinSet(name + ".span.apex", m.indexing_span.apex.elements()),
                   FinSet(src_name + ".indexing", m.src.indexing.elements()),
                   m.indexing_span.left.table);
  FinFunction right(FinSet(name + ".span.apex", m.indexing_span.apex.elements()),
                    FinSet(dst_name + ".indexing", m.dst.indexing.elements()),
                    m.indexing_span.right.table);
  put_finset(d, name + ".span.apex", m.indexing_span.apex);
  put_function(d, name + ".span.left", left, name + ".span.apex",
               src_name + ".indexing");
  put_function(d, name + ".span.right", right, name + ".span.apex",
               dst_name + ".indexing");
  d.add(name + ".span", SpanEntry{name + ".span.left", name + ".span.right"});
  FamilyProarrowEntry e;
  e.src = src_name;
  e.dst = dst_name;
  e.span = name + ".span";
  for (int a = 0; a < m.indexing_span.apex.size(); ++a) {
    const std::string& label = m.indexing_span.apex.elements()[a];
    std::string sub = name + ".comp." + label;
    const SetSpan& comp = SpanDouble::pro_of(m.components[a]);
    // Component feet must be the named family carriers; re-emit with the
    // canonical sub-entry names for byte-stable cross references.
    int li = m.indexing_span.left.table[a];
    int ri = m.indexing_span.right.table[a];
    std::string srcn = src_name + ".at." + m.src.indexing.elements()[li];
    std::string dstn = dst_name + ".at." + m.dst.indexing.elements()[ri];
    put_finset(d, sub + ".apex", comp.apex);
    put_function(d, sub + ".left",
                 FinFunction(FinSet(sub + ".apex", comp.apex.elements()),
                             FinSet(srcn, comp.left_foot.elements()),
                             comp.left.table),
                 sub + ".apex", srcn);
    put_function(d, sub + ".right",
                 FinFunction(FinSet(sub + ".apex", comp.apex.elements()),
                             FinSet(dstn, comp.right_foot.elements()),
                             comp.right.table),
                 sub + ".apex", dstn);
    d.add(sub, SpanEntry{sub + ".left", sub + ".right"});
    e.components[label] = sub;
  }
  d.add(name, e);
}

void put_theory(Document& d, const std::string& name, const TheoryPresentation& t) {
  d.add(name, TheoryEntry{t});
}

namespace {

std::map<std::string, std::string> table_of(const FinFunction& f) {
  std::map<std::string, std::string> out;
  for (size_t i = 0; i < f.table.size(); ++i)
    out[f.dom.elements()[i]] = f.cod.elements()[f.table[i]];
  return out;
}

}  // namespace

void put_model(Document& d, const std::string& name, const ModelData& m,
               const std::string& theory_name) {
  ModelEntry e;
  e.theory = theory_name;
  for (const auto& [gen, set] : m.on_objects) {
    std::string sub = name + ".ob." + gen;
    put_finset(d, sub, set);
    e.objects[gen] = sub;
  }
  // Atomic spans reference the object entries as their feet so resolved
  // frames line up with the object assignments.
  auto feet_of = [&](const std::string& key) -> std::pair<std::string, std::string> {
    if (key.rfind("id:", 0) == 0) {
      std::string ob = name + ".ob." + key.substr(3);
      return {ob, ob};
    }
    require(key.rfind("gen:", 0) == 0, Errc::schema_error,
            "bad atomic key '" + key + "'");
    for (const auto& g : m.theory.proarrow_generators)
      if (g.name == key.substr(4)) {
        require(g.src.factors.size() == 1 && g.dst.factors.size() == 1,
                Errc::schema_error, "generator feet must be single objects");
        return {name + ".ob." + g.src.factors[0], name + ".ob." + g.dst.factors[0]};
      }
    fail(Errc::schema_error, "unknown proarrow generator in '" + key + "'");
  };
  for (const auto& [key, span] : m.on_atomic) {
    std::string sub = name + ".pro." + key;
    auto [srcn, dstn] = feet_of(key);
    put_finset(d, sub + ".apex", span.apex);
    put_function(d, sub + ".left",
                 FinFunction(FinSet(sub + ".apex", span.apex.elements()),
                             FinSet(srcn, span.left_foot.elements()),
                             span.left.table),
                 sub + ".apex", srcn);
    put_function(d, sub + ".right",
                 FinFunction(FinSet(sub + ".apex", span.apex.elements()),
                             FinSet(dstn, span.right_foot.elements()),
                             span.right.table),
                 sub + ".apex", dstn);
    d.add(sub, SpanEntry{sub + ".left", sub + ".right"});
    e.atomics[key] = sub;
  }
  for (const auto& [gen, table] : m.on_cells) e.cells[gen] = table_of(table);
  for (const auto& [pair, table] : m.laxators)
    e.laxators.emplace_back(pair.first, pair.second, table_of(table));
  for (const auto& [gen, table] : m.unitors) e.unitors[gen] = table_of(table);
  for (const auto& ov : m.laxator_overrides)
    e.overrides.emplace_back(pro_word_to_json(ov.lhs), pro_word_to_json(ov.rhs),
                             table_of(ov.table));
  d.add(name, e);
}

void put_transformation(Document& d, const std::string& name,
                        const TransformationData& t, const std::string& source_name,
                        const std::string& target_name) {
  TransformationEntry e;
  e.source = source_name;
  e.target = target_name;
  for (const auto& [gen, f] : t.components) e.components[gen] = table_of(f);
  for (const auto& [key, f] : t.naturality) e.naturality[key] = table_of(f);
  d.add(name, e);
}

void put_report(Document& d, const std::string& name, const ReportEntry& r) {
  d.add(name, r);
}

ReportEntry report_from_universal(const UniversalCheckReport& rep) {
  ReportEntry out;
  out.verdict = rep.ok() ? "pass" : "fail";
  out.cases = rep.cases_tried;
  out.failures = rep.failures;
  std::sort(out.failures.begin(), out.failures.end());
  return out;
}

ReportEntry report_from_theory(const TheoryCheckReport& rep) {
  ReportEntry out;
  out.verdict = rep.pass() ? "pass" : "fail";
  out.cases = rep.checks;
  for (const auto& v : rep.violations)
    out.failures.push_back(v.axiom + " @ " + v.instance);
  std::sort(out.failures.begin(), out.failures.end());
  return out;
}

}  // namespace dcat
