#include <json.hpp>
#include <unordered_map>

#include "hyll/certificate.hpp"
#include "hyll/parser.hpp"

namespace hyll {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "hyll-certificate";
constexpr int kVersion = 1;

class Table {
 public:
  int id(const Judgement& j) {
    std::string text = to_string(j);
    auto [it, inserted] = ids_.emplace(text, static_cast<int>(texts_.size()));
    if (inserted) texts_.push_back(std::move(text));
    return it->second;
  }
  const std::vector<std::string>& texts() const { return texts_; }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> texts_;
};

json encode(const Derivation& d, Table& t) {
  json n;
  n["rule"] = rule_name(d.rule);
  json gamma = json::array(), delta = json::array();
  for (const auto& j : d.conclusion.gamma) gamma.push_back(t.id(j));
  for (const auto& j : d.conclusion.delta) delta.push_back(t.id(j));
  n["conclusion"] = {{"gamma", gamma}, {"delta", delta}, {"goal", t.id(d.conclusion.goal)}};
  if (d.principal >= 0) n["principal"] = d.principal;
  if (!d.split.empty() || d.rule == Rule::TensorR || d.rule == Rule::LimpL || (d.rule == Rule::Cut && d.cut_kind == 1))
    n["split"] = d.split;
  if (const auto* term = std::get_if<Term>(&d.witness)) n["witness"] = {{"term", term->to_string()}};
  if (const auto* world = std::get_if<WorldExpr>(&d.witness)) n["witness"] = {{"world", world->to_string()}};
  if (!d.fresh.empty()) n["fresh"] = d.fresh;
  if (d.cut) n["cut"] = {{"judgement", t.id(*d.cut)}, {"kind", d.cut_kind}};
  json premises = json::array();
  for (const auto& p : d.premises) premises.push_back(encode(p, t));
  n["premises"] = std::move(premises);
  return n;
}

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::Certificate, msg); }

class Decoder {
 public:
  Decoder(const json& table, const ParseContext& ctx) {
    if (!table.is_array()) bad("table must be an array");
    for (const auto& e : table) {
      if (!e.is_string()) bad("table entries must be strings");
      try {
        judgements_.push_back(parse_judgement(e.get<std::string>(), ctx));
      } catch (const Error& err) {
        bad("table entry '" + e.get<std::string>() + "': " + err.what());
      }
    }
  }

  Derivation node(const json& n) const {
    if (!n.is_object()) bad("derivation node must be an object");
    Derivation d;
    auto rule = rule_from_name(field(n, "rule").get<std::string>());
    if (!rule) bad("unknown rule '" + n["rule"].get<std::string>() + "'");
    d.rule = *rule;
    const json& c = field(n, "conclusion");
    for (const auto& i : field(c, "gamma")) d.conclusion.gamma.push_back(at(i));
    for (const auto& i : field(c, "delta")) d.conclusion.delta.push_back(at(i));
    d.conclusion.goal = at(field(c, "goal"));
    if (n.contains("principal")) d.principal = n["principal"].get<int>();
    if (n.contains("split")) d.split = n["split"].get<std::vector<int>>();
    if (n.contains("witness")) {
      const json& w = n["witness"];
      try {
        if (w.contains("term"))
          d.witness = parse_term(w["term"].get<std::string>());
        else if (w.contains("world"))
          d.witness = parse_world(w["world"].get<std::string>());
        else
          bad("witness must have a term or world field");
      } catch (const ParseError& e) {
        bad(std::string("witness: ") + e.what());
      }
    }
    if (n.contains("fresh")) d.fresh = n["fresh"].get<std::string>();
    if (n.contains("cut")) {
      d.cut = at(field(n["cut"], "judgement"));
      d.cut_kind = n["cut"].value("kind", 1);
    }
    for (const auto& p : field(n, "premises")) d.premises.push_back(node(p));
    return d;
  }

 private:
  std::vector<Judgement> judgements_;

  static const json& field(const json& n, const char* name) {
    if (!n.is_object() || !n.contains(name)) bad(std::string("missing field '") + name + "'");
    return n.at(name);
  }

  const Judgement& at(const json& i) const {
    if (!i.is_number_integer()) bad("judgement reference must be an integer");
    auto k = i.get<long long>();
    if (k < 0 || k >= static_cast<long long>(judgements_.size())) bad("judgement reference out of range");
    return judgements_[static_cast<std::size_t>(k)];
  }
};

}  // namespace

std::string write_certificate(const Certificate& c) {
  Table table;
  json obligations = json::array();
  for (const auto& o : c.obligations) {
    json e;
    e["label"] = o.label;
    e["case"] = o.case_index ? json(*o.case_index) : json(nullptr);
    e["proof"] = encode(o.proof, table);
    obligations.push_back(std::move(e));
  }
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["allow_cut"] = c.allow_cut;
  doc["signature"] = c.signature;
  doc["witnesses"] = c.witnesses;
  doc["table"] = table.texts();
  doc["obligations"] = std::move(obligations);
  return doc.dump(2) + "\n";
}

Certificate read_certificate(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", "") != kFormat) bad("not a hyll certificate");
    if (doc.value("version", 0) != kVersion) bad("unsupported certificate version");
    Certificate c;
    c.allow_cut = doc.value("allow_cut", false);
    if (doc.contains("signature")) c.signature = doc["signature"].get<Signature>();
    if (doc.contains("witnesses")) c.witnesses = doc["witnesses"].get<std::map<std::string, std::string>>();
    ParseContext ctx;
    ctx.signature = c.signature;
    ctx.allow_metas = false;
    ctx.allow_slots = false;
    Decoder dec(doc.at("table"), ctx);
    for (const auto& o : doc.at("obligations")) {
      Obligation ob;
      ob.label = o.value("label", "");
      if (o.contains("case") && !o["case"].is_null()) ob.case_index = o["case"].get<int>();
      ob.proof = dec.node(o.at("proof"));
      c.obligations.push_back(std::move(ob));
    }
    return c;
  } catch (const json::exception& e) {
    bad(std::string("malformed certificate: ") + e.what());
  }
}

CertificateVerdict check_certificate(const Certificate& c) {
  CertificateVerdict v;
  for (std::size_t i = 0; i < c.obligations.size(); ++i) {
    if (auto e = check_derivation(c.obligations[i].proof, c.allow_cut)) {
      v.ok = false;
      v.obligation = static_cast<int>(i);
      v.error = *e;
      return v;
    }
  }
  return v;
}

}  // namespace hyll
