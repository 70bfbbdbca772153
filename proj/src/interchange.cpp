#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cellgauge/error.hpp"
#include "cellgauge/io.hpp"

namespace cellgauge {

using nlohmann::json;

namespace {

const char* kindName(const json& v) {
  switch (v.type()) {
    case json::value_t::null: return "null";
    case json::value_t::boolean: return "boolean";
    case json::value_t::string: return "string";
    case json::value_t::array: return "array";
    case json::value_t::object: return "object";
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
    case json::value_t::number_float: return "number";
    default: return "unsupported";
  }
}

void requireKeys(const json& obj, const std::string& path,
                 std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw SchemaError(path + "/" + key, "unexpected member");
  }
}

const std::string& asString(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, std::string("expected string, got ") + kindName(v));
  return v.get_ref<const std::string&>();
}

std::optional<ValueType> parseType(const std::string& t) {
  if (t == "number") return ValueType::Number;
  if (t == "text") return ValueType::Text;
  if (t == "boolean") return ValueType::Boolean;
  if (t == "error") return ValueType::Error;
  return std::nullopt;
}

void readCell(const json& c, const std::string& path, Worksheet& sheet) {
  if (!c.is_object()) throw SchemaError(path, "cell must be an object");
  requireKeys(c, path, {"ref", "formula", "value", "type", "fill"});
  if (!c.contains("ref")) throw SchemaError(path + "/ref", "missing");
  const std::string& ref = asString(c["ref"], path + "/ref");
  int row = 0, column = 0;
  if (!parseA1(ref, row, column)) throw SchemaError(path + "/ref", "not an A1 reference: " + ref);
  if (sheet.find(row, column)) throw SchemaError(path + "/ref", "duplicate cell " + ref);

  bool hasFormula = c.contains("formula");
  bool hasValue = c.contains("value");
  if (hasFormula && hasValue) throw SchemaError(path, "both formula and value");

  std::optional<ValueType> type;
  if (c.contains("type")) {
    const std::string& t = asString(c["type"], path + "/type");
    type = parseType(t);
    if (!type) throw SchemaError(path + "/type", "unknown type " + t);
  }

  if (hasFormula) {
    const std::string& f = asString(c["formula"], path + "/formula");
    if (f.empty() || f.front() != '=') throw SchemaError(path + "/formula", "must start with '='");
    sheet.setFormula(row, column, f, type);
  } else if (hasValue) {
    const json& v = c["value"];
    if (!type) throw SchemaError(path + "/type", "required with value");
    const std::string vpath = path + "/value";
    switch (*type) {
      case ValueType::Number:
        if (!v.is_number()) throw SchemaError(vpath, "number expected");
        sheet.setLiteral(row, column, Literal::number(v.get<double>()));
        break;
      case ValueType::Text:
        sheet.setLiteral(row, column, Literal::text(asString(v, vpath)));
        break;
      case ValueType::Boolean:
        if (!v.is_boolean()) throw SchemaError(vpath, "boolean expected");
        sheet.setLiteral(row, column, Literal::boolean(v.get<bool>()));
        break;
      case ValueType::Error:
        sheet.setLiteral(row, column, Literal::error(asString(v, vpath)));
        break;
    }
  } else if (!c.contains("fill")) {
    throw SchemaError(path, "cell has neither formula, value nor fill");
  } else if (type) {
    throw SchemaError(path + "/type", "type without value");
  }

  if (c.contains("fill"))
    sheet.setVisualProperty(row, column, {"fillColor", asString(c["fill"], path + "/fill")});
}

json literalValue(const Literal& lit) {
  return std::visit([](const auto& v) -> json { return v; }, lit.value);
}

}  // namespace

Workbook readInterchange(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "document must be an object");
  requireKeys(doc, "", {"name", "definedNames", "sheets"});
  Workbook wb(doc.contains("name") ? asString(doc["name"], "/name") : std::string());

  if (!doc.contains("sheets")) throw SchemaError("/sheets", "missing");
  const json& sheets = doc["sheets"];
  if (!sheets.is_array()) throw SchemaError("/sheets", "expected array");
  for (std::size_t i = 0; i < sheets.size(); ++i) {
    const std::string path = "/sheets/" + std::to_string(i);
    const json& s = sheets[i];
    if (!s.is_object()) throw SchemaError(path, "sheet must be an object");
    requireKeys(s, path, {"name", "cells"});
    if (!s.contains("name")) throw SchemaError(path + "/name", "missing");
    const std::string& name = asString(s["name"], path + "/name");
    if (name.empty()) throw SchemaError(path + "/name", "empty sheet name");
    if (wb.findSheet(name)) throw SchemaError(path + "/name", "duplicate sheet name " + name);
    Worksheet& ws = wb.addSheet(name);
    if (!s.contains("cells")) continue;
    const json& cells = s["cells"];
    if (!cells.is_array()) throw SchemaError(path + "/cells", "expected array");
    for (std::size_t j = 0; j < cells.size(); ++j)
      readCell(cells[j], path + "/cells/" + std::to_string(j), ws);
  }

  if (doc.contains("definedNames")) {
    const json& names = doc["definedNames"];
    if (!names.is_array()) throw SchemaError("/definedNames", "expected array");
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string path = "/definedNames/" + std::to_string(i);
      const json& n = names[i];
      if (!n.is_object()) throw SchemaError(path, "expected object");
      requireKeys(n, path, {"name", "target"});
      if (!n.contains("name")) throw SchemaError(path + "/name", "missing");
      if (!n.contains("target")) throw SchemaError(path + "/target", "missing");
      const std::string& name = asString(n["name"], path + "/name");
      if (name.empty()) throw SchemaError(path + "/name", "empty name");
      if (wb.findName(name)) throw SchemaError(path + "/name", "duplicate name " + name);
      wb.defineName(name, asString(n["target"], path + "/target"));
    }
  }
  return wb;
}

json writeInterchange(const Workbook& wb) {
  json doc;
  doc["name"] = wb.name();
  json names = json::array();
  for (const auto& [name, target] : wb.definedNames())
    names.push_back({{"name", name}, {"target", target}});
  doc["definedNames"] = std::move(names);
  json sheets = json::array();
  for (const auto& sheet : wb.sheets()) {
    json cells = json::array();
    for (const auto& [key, cell] : sheet.cells()) {
      json c;
      c["ref"] = a1(key.first, key.second);
      if (const auto* f = cell.formula()) {
        c["formula"] = f->text();
        if (f->cachedType()) c["type"] = std::string(toString(*f->cachedType()));
      } else if (const auto* lit = cell.literal()) {
        c["value"] = literalValue(*lit);
        c["type"] = std::string(toString(lit->type));
      }
      for (const auto& p : cell.visualProperties)
        if (p.key == "fillColor") c["fill"] = p.value;
      if (c.size() == 1) continue;  // nothing representable beyond the ref
      cells.push_back(std::move(c));
    }
    sheets.push_back({{"name", sheet.name()}, {"cells", std::move(cells)}});
  }
  doc["sheets"] = std::move(sheets);
  return doc;
}

Workbook readInterchangeFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  Workbook wb = readInterchange(doc);
  if (wb.name().empty()) wb.setName(path.stem().string());
  return wb;
}

Workbook readWorkbook(const std::filesystem::path& path, InputFormat format,
                      std::vector<std::string>* warnings) {
  if (format == InputFormat::Auto) {
    std::string ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".xlsx" || ext == ".xlsm")
      format = InputFormat::Xlsx;
    else if (ext == ".json")
      format = InputFormat::Json;
    else
      throw IoError("unsupported file type: " + path.string());
  }
  return format == InputFormat::Xlsx ? readXlsx(path, warnings) : readInterchangeFile(path);
}

}  // namespace cellgauge
