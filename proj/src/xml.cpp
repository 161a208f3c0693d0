// Copyright 2026 The scoregraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xml.hpp"

#include <expat.h>

#include <memory>

#include "scoregraph/error.hpp"

namespace scoregraph::xml {

const std::string* Element::attr(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string Element::attr_or(std::string_view key, std::string fallback) const {
  const auto* v = attr(key);
  return v ? *v : fallback;
}

const Element* Element::child(std::string_view child_name) const {
  for (const auto& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

std::string Element::child_text(std::string_view child_name) const {
  const auto* c = child(child_name);
  return c ? trim(c->text) : std::string{};
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

namespace {

struct BuildState {
  Element root;
  std::vector<Element*> stack;
  bool has_root = false;
  XML_Parser parser = nullptr;
};

void on_start(void* user, const XML_Char* name, const XML_Char** atts) {
  auto* st = static_cast<BuildState*>(user);
  Element el;
  el.name = name;
  el.line = static_cast<long>(XML_GetCurrentLineNumber(st->parser));
  for (int i = 0; atts[i] != nullptr; i += 2) {
    el.attributes.emplace_back(atts[i], atts[i + 1]);
  }
  if (st->stack.empty()) {
    st->root = std::move(el);
    st->has_root = true;
    st->stack.push_back(&st->root);
  } else {
    auto& parent = *st->stack.back();
    parent.children.push_back(std::move(el));
    st->stack.push_back(&parent.children.back());
  }
}

void on_end(void* user, const XML_Char*) {
  auto* st = static_cast<BuildState*>(user);
  st->stack.pop_back();
}

void on_text(void* user, const XML_Char* s, int len) {
  auto* st = static_cast<BuildState*>(user);
  if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

Element parse(std::string_view document) {
  // Child vectors may reallocate while siblings are appended, which would
  // invalidate the pointer stack; children are therefore appended only to
  // the innermost open element, whose own address is stable until it closes.
  BuildState st;
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate("UTF-8"), &XML_ParserFree);
  if (!parser) fail(ErrorKind::Io, "cannot allocate XML parser");
  st.parser = parser.get();
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    const auto line = XML_GetCurrentLineNumber(parser.get());
    const auto column = XML_GetCurrentColumnNumber(parser.get());
    const auto byte = XML_GetCurrentByteIndex(parser.get());
    fail(ErrorKind::Parse, std::string("malformed XML: ") +
                               XML_ErrorString(XML_GetErrorCode(parser.get())) + " at line " +
                               std::to_string(line) + ", column " + std::to_string(column) +
                               ", byte " + std::to_string(byte));
  }
  if (!st.has_root) fail(ErrorKind::Parse, "malformed XML: no root element at byte 0");
  return std::move(st.root);
}

std::string escape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace scoregraph::xml
