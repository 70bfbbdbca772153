#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <unordered_map>

#include "cellgauge/error.hpp"
#include "cellgauge/formula.hpp"
#include "cellgauge/io.hpp"
#include "zip_archive.hpp"

namespace cellgauge {

namespace pt = boost::property_tree;

namespace {

using detail::ZipArchive;

std::string_view localName(std::string_view tag) {
  auto colon = tag.find(':');
  return colon == std::string_view::npos ? tag : tag.substr(colon + 1);
}

pt::ptree parseXml(const std::string& text, const std::string& part) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw XlsxError(XlsxError::Kind::MalformedSheetXml, part, e.message());
  }
  return tree;
}

// First child whose local name matches, ignoring namespace prefixes.
const pt::ptree* child(const pt::ptree& node, std::string_view name) {
  for (const auto& [tag, sub] : node)
    if (localName(tag) == name) return &sub;
  return nullptr;
}

template <typename F>
void eachChild(const pt::ptree& node, std::string_view name, F&& f) {
  for (const auto& [tag, sub] : node)
    if (localName(tag) == name) f(sub);
}

std::optional<std::string> attr(const pt::ptree& node, std::string_view name) {
  const pt::ptree* attrs = child(node, "<xmlattr>");
  if (!attrs) return std::nullopt;
  for (const auto& [key, value] : *attrs)
    if (key == name || localName(key) == name) return value.data();
  return std::nullopt;
}

// Concatenated text of <t> descendants, skipping phonetic runs.
std::string richText(const pt::ptree& node) {
  std::string out;
  for (const auto& [tag, sub] : node) {
    auto name = localName(tag);
    if (name == "t")
      out += sub.data();
    else if (name == "r")
      out += richText(sub);
  }
  return out;
}

std::string joinPart(const std::string& baseDir, const std::string& target) {
  if (!target.empty() && target.front() == '/') return target.substr(1);
  std::vector<std::string> parts;
  std::string combined = baseDir.empty() ? target : baseDir + "/" + target;
  std::stringstream ss(combined);
  std::string seg;
  while (std::getline(ss, seg, '/')) {
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") {
      if (!parts.empty()) parts.pop_back();
      continue;
    }
    parts.push_back(seg);
  }
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "/") + p;
  return out;
}

std::string dirOf(const std::string& part) {
  auto slash = part.rfind('/');
  return slash == std::string::npos ? std::string() : part.substr(0, slash);
}

std::string relsPathFor(const std::string& part) {
  std::string dir = dirOf(part);
  std::string file = part.substr(dir.empty() ? 0 : dir.size() + 1);
  return (dir.empty() ? "" : dir + "/") + "_rels/" + file + ".rels";
}

// rId -> (target part, type)
std::map<std::string, std::pair<std::string, std::string>> readRels(const ZipArchive& zip,
                                                                    const std::string& part) {
  std::map<std::string, std::pair<std::string, std::string>> out;
  std::string relsPart = relsPathFor(part);
  auto text = zip.read(relsPart);
  if (!text) return out;
  pt::ptree tree = parseXml(*text, relsPart);
  const pt::ptree* root = child(tree, "Relationships");
  if (!root) return out;
  eachChild(*root, "Relationship", [&](const pt::ptree& rel) {
    auto id = attr(rel, "Id");
    auto target = attr(rel, "Target");
    if (!id || !target) return;
    if (attr(rel, "TargetMode").value_or("") == "External") return;
    out[*id] = {joinPart(dirOf(part), *target), attr(rel, "Type").value_or("")};
  });
  return out;
}

bool endsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::optional<double> parseDouble(const std::string& s) {
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  if (first < last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

// fill id -> color text, for fills that actually paint something
std::vector<std::string> readCellFills(const ZipArchive& zip, const std::string& stylesPart) {
  std::vector<std::string> xfFill;
  auto text = zip.read(stylesPart);
  if (!text) return xfFill;
  pt::ptree tree;
  try {
    tree = parseXml(*text, stylesPart);
  } catch (const XlsxError&) {
    return xfFill;  // styles only feed visual properties
  }
  const pt::ptree* sheet = child(tree, "styleSheet");
  if (!sheet) return xfFill;
  std::vector<std::string> fills;
  if (const pt::ptree* f = child(*sheet, "fills")) {
    eachChild(*f, "fill", [&](const pt::ptree& fill) {
      std::string color;
      if (const pt::ptree* pattern = child(fill, "patternFill")) {
        std::string type = attr(*pattern, "patternType").value_or("none");
        if (type != "none" && type != "gray125") {
          if (const pt::ptree* fg = child(*pattern, "fgColor")) {
            if (auto rgb = attr(*fg, "rgb"))
              color = *rgb;
            else if (auto theme = attr(*fg, "theme"))
              color = "theme:" + *theme;
            else if (auto indexed = attr(*fg, "indexed"))
              color = "indexed:" + *indexed;
          }
        }
      }
      fills.push_back(color);
    });
  }
  if (const pt::ptree* xfs = child(*sheet, "cellXfs")) {
    eachChild(*xfs, "xf", [&](const pt::ptree& xf) {
      std::string color;
      if (auto id = attr(xf, "fillId")) {
        std::size_t idx = 0;
        auto [p, ec] = std::from_chars(id->data(), id->data() + id->size(), idx);
        if (ec == std::errc() && idx < fills.size()) color = fills[idx];
      }
      xfFill.push_back(color);
    });
  }
  return xfFill;
}

struct SharedFormula {
  int row;
  int column;
  std::string text;  // with leading '='
};

class SheetReader {
 public:
  SheetReader(Worksheet& sheet, const std::vector<std::string>& sharedStrings,
              const std::vector<std::string>& xfFill, std::vector<std::string>* warnings,
              std::string part)
      : sheet_(sheet),
        strings_(sharedStrings),
        xfFill_(xfFill),
        warnings_(warnings),
        part_(std::move(part)) {}

  void read(const pt::ptree& tree) {
    const pt::ptree* ws = child(tree, "worksheet");
    if (!ws) throw XlsxError(XlsxError::Kind::MalformedSheetXml, part_, "missing worksheet element");
    const pt::ptree* data = child(*ws, "sheetData");
    if (!data) return;
    int lastRow = 0;
    eachChild(*data, "row", [&](const pt::ptree& row) {
      int r = lastRow + 1;
      if (auto rAttr = attr(row, "r")) {
        int parsed = 0;
        auto [p, ec] = std::from_chars(rAttr->data(), rAttr->data() + rAttr->size(), parsed);
        if (ec == std::errc() && parsed >= 1 && parsed <= kMaxRows) r = parsed;
      }
      lastRow = r;
      int lastColumn = 0;
      eachChild(row, "c", [&](const pt::ptree& c) { lastColumn = cell(c, r, lastColumn); });
    });
  }

 private:
  void warn(const std::string& what) {
    if (warnings_) warnings_->push_back(part_ + ": " + what);
  }

  // Returns the column consumed.
  int cell(const pt::ptree& c, int row, int lastColumn) {
    int column = lastColumn + 1;
    if (auto ref = attr(c, "r")) {
      int rr = 0, cc = 0;
      if (parseA1(*ref, rr, cc)) {
        row = rr;
        column = cc;
      } else {
        warn("bad cell reference '" + *ref + "'");
      }
    }
    if (column > kMaxColumns) {
      warn("column out of range");
      return column;
    }
    std::string type = attr(c, "t").value_or("n");
    const pt::ptree* v = child(c, "v");
    const pt::ptree* f = child(c, "f");

    if (auto s = attr(c, "s")) {
      std::size_t idx = 0;
      auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), idx);
      if (ec == std::errc() && idx < xfFill_.size() && !xfFill_[idx].empty())
        sheet_.setVisualProperty(row, column, {"fillColor", xfFill_[idx]});
    }

    if (f) {
      if (auto text = formulaText(*f, row, column)) {
        std::optional<ValueType> cached;
        if (v) cached = typeOf(type);
        sheet_.setFormula(row, column, *text, cached);
        return column;
      }
    }
    if (type == "inlineStr") {
      if (const pt::ptree* is = child(c, "is")) sheet_.setLiteral(row, column, Literal::text(richText(*is)));
      return column;
    }
    if (!v) return column;
    const std::string& raw = v->data();
    if (type == "s") {
      std::size_t idx = 0;
      auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), idx);
      if (ec != std::errc() || idx >= strings_.size()) {
        warn("shared string index out of range at " + a1(row, column));
        sheet_.setLiteral(row, column, Literal::text(""));
      } else {
        sheet_.setLiteral(row, column, Literal::text(strings_[idx]));
      }
    } else if (type == "str" || type == "d") {
      sheet_.setLiteral(row, column, Literal::text(raw));
    } else if (type == "b") {
      sheet_.setLiteral(row, column, Literal::boolean(raw == "1" || raw == "true"));
    } else if (type == "e") {
      sheet_.setLiteral(row, column, Literal::error(raw));
    } else if (auto num = parseDouble(raw)) {
      sheet_.setLiteral(row, column, Literal::number(*num));
    } else {
      warn("unparseable number '" + raw + "' at " + a1(row, column));
    }
    return column;
  }

  static ValueType typeOf(const std::string& t) {
    if (t == "s" || t == "str" || t == "inlineStr") return ValueType::Text;
    if (t == "b") return ValueType::Boolean;
    if (t == "e") return ValueType::Error;
    return ValueType::Number;
  }

  std::optional<std::string> formulaText(const pt::ptree& f, int row, int column) {
    std::string text = f.data();
    std::string kind = attr(f, "t").value_or("normal");
    if (kind == "shared") {
      auto si = attr(f, "si");
      if (!si) {
        warn("shared formula without group id at " + a1(row, column));
        return std::nullopt;
      }
      if (!text.empty()) {
        groups_[*si] = SharedFormula{row, column, "=" + text};
        return "=" + text;
      }
      auto it = groups_.find(*si);
      if (it == groups_.end()) {
        warn("shared formula group " + *si + " has no anchor before " + a1(row, column));
        return std::nullopt;
      }
      try {
        return translateFormula(it->second.text, row - it->second.row, column - it->second.column);
      } catch (const Error&) {
        // untranslatable text still belongs to a formula cell
        return it->second.text;
      }
    }
    if (text.empty()) return std::nullopt;
    return "=" + text;
  }

  Worksheet& sheet_;
  const std::vector<std::string>& strings_;
  const std::vector<std::string>& xfFill_;
  std::vector<std::string>* warnings_;
  std::string part_;
  std::unordered_map<std::string, SharedFormula> groups_;
};

Workbook readPackage(const ZipArchive& zip, std::string name, std::vector<std::string>* warnings) {
  std::string workbookPart;
  for (const auto& [id, rel] : readRels(zip, ""))
    if (endsWith(rel.second, "/officeDocument")) workbookPart = rel.first;
  if (workbookPart.empty() || !zip.contains(workbookPart)) workbookPart = "xl/workbook.xml";
  auto workbookXml = zip.read(workbookPart);
  if (!workbookXml)
    throw XlsxError(XlsxError::Kind::MissingWorkbookPart, workbookPart, "workbook part not found");

  pt::ptree wbTree = parseXml(*workbookXml, workbookPart);
  const pt::ptree* root = child(wbTree, "workbook");
  if (!root) throw XlsxError(XlsxError::Kind::MalformedSheetXml, workbookPart, "missing workbook element");
  auto rels = readRels(zip, workbookPart);

  std::vector<std::string> sharedStrings;
  std::string stylesPart;
  for (const auto& [id, rel] : rels) {
    if (endsWith(rel.second, "/sharedStrings")) {
      if (auto text = zip.read(rel.first)) {
        pt::ptree sst = parseXml(*text, rel.first);
        if (const pt::ptree* s = child(sst, "sst"))
          eachChild(*s, "si", [&](const pt::ptree& si) { sharedStrings.push_back(richText(si)); });
      }
    } else if (endsWith(rel.second, "/styles")) {
      stylesPart = rel.first;
    }
  }
  std::vector<std::string> xfFill;
  if (!stylesPart.empty()) xfFill = readCellFills(zip, stylesPart);

  Workbook wb(std::move(name));
  std::vector<std::string> parts;
  if (const pt::ptree* sheets = child(*root, "sheets")) {
    eachChild(*sheets, "sheet", [&](const pt::ptree& s) {
      std::string sheetName = attr(s, "name").value_or("");
      if (sheetName.empty() || wb.findSheet(sheetName)) {
        if (warnings) warnings->push_back(workbookPart + ": skipping unnamed or duplicate sheet");
        return;
      }
      std::string part;
      if (auto rid = attr(s, "id")) {
        auto it = rels.find(*rid);
        if (it != rels.end()) part = it->second.first;
      }
      wb.addSheet(sheetName);
      parts.push_back(part);
    });
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    Worksheet& ws = wb.sheet(i);
    auto text = part.empty() ? std::nullopt : zip.read(part);
    if (!text) {
      if (warnings) warnings->push_back("sheet '" + ws.name() + "' has no readable part");
      continue;
    }
    pt::ptree tree = parseXml(*text, part);
    SheetReader(ws, sharedStrings, xfFill, warnings, part).read(tree);
  }

  if (const pt::ptree* names = child(*root, "definedNames")) {
    // Workbook-scoped names win over sheet-scoped ones with the same name.
    std::vector<std::pair<std::string, std::string>> local;
    eachChild(*names, "definedName", [&](const pt::ptree& n) {
      auto nm = attr(n, "name");
      if (!nm || nm->empty()) return;
      if (attr(n, "localSheetId"))
        local.emplace_back(*nm, n.data());
      else if (!wb.findName(*nm))
        wb.defineName(*nm, n.data());
    });
    for (auto& [nm, target] : local)
      if (!wb.findName(nm)) wb.defineName(nm, target);
  }
  return wb;
}

}  // namespace

Workbook readXlsxBytes(std::vector<std::uint8_t> bytes, std::string name,
                       std::vector<std::string>* warnings) {
  ZipArchive zip(std::move(bytes));
  return readPackage(zip, std::move(name), warnings);
}

Workbook readXlsx(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return readXlsxBytes(std::move(bytes), path.stem().string(), warnings);
}

}  // namespace cellgauge
