#include "focalqg/focal.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "focalqg/error.hpp"
#include "focalqg/text.hpp"

namespace focalqg {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty() || s.size() > 9) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

bool parse_size(std::string_view s, std::size_t& out) {
  int v = 0;
  if (!parse_int(s, v)) return false;
  out = static_cast<std::size_t>(v);
  return true;
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  fail(ErrorCode::MalformedConllu, "conllu line " + std::to_string(line) + ": " + what);
}

void validate_tree(const std::vector<Token>& tokens) {
  int roots = 0;
  for (const auto& t : tokens)
    if (t.head == 0) ++roots;
  if (roots > 1) fail(ErrorCode::MultipleRoots, std::to_string(roots) + " tokens have head 0");
  const int n = static_cast<int>(tokens.size());
  for (const auto& t : tokens) {
    int cur = t.index, steps = 0;
    while (cur != 0) {
      if (++steps > n) fail(ErrorCode::CyclicTree, "token " + std::to_string(t.index) + " never reaches the root");
      cur = tokens[static_cast<std::size_t>(cur - 1)].head;
    }
  }
  if (roots == 0) fail(ErrorCode::CyclicTree, "no root token");
}

bool equal_ignore_ascii_case(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::vector<Span> words_in(std::string_view text, Span span) {
  std::vector<Span> out;
  std::size_t i = span.start;
  while (i < span.end) {
    while (i < span.end && is_ws(text[i])) ++i;
    std::size_t b = i;
    while (i < span.end && !is_ws(text[i])) ++i;
    if (i > b) out.push_back({b, i});
  }
  return out;
}

}  // namespace

int ParsedSentence::root_index() const {
  for (const auto& t : tokens)
    if (t.head == 0) return t.index;
  return 0;
}

ParsedSentence ingest_parse(std::string_view block) {
  ParsedSentence parsed;
  std::size_t line_no = 0;
  int with_range = 0;
  for (std::string_view line : split(block, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_blank(line)) continue;
    if (line.front() == '#') {
      std::string_view body = line.substr(1);
      auto eq = body.find('=');
      if (eq != std::string_view::npos) {
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key == "sent_id") parsed.sent_id = value;
        if (key == "text") parsed.text = value;
      }
      continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != 10) malformed(line_no, "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;
    Token tok;
    if (!parse_int(cols[0], tok.index) || tok.index != static_cast<int>(parsed.tokens.size()) + 1)
      malformed(line_no, "token ids must run 1, 2, 3, ... (got '" + std::string(cols[0]) + "')");
    tok.surface = std::string(cols[1]);
    if (tok.surface.empty()) malformed(line_no, "empty FORM");
    if (!parse_int(cols[6], tok.head)) malformed(line_no, "HEAD must be an integer");
    tok.dep_tag = std::string(cols[7]);
    if (tok.dep_tag.empty() || tok.dep_tag == "_") malformed(line_no, "missing DEPREL");
    bool has_range = false;
    if (cols[9] != "_") {
      for (std::string_view item : split(cols[9], '|')) {
        auto eq = item.find('=');
        if (eq == std::string_view::npos) continue;
        std::string_view key = item.substr(0, eq), value = item.substr(eq + 1);
        if (key == "NE") {
          tok.ne_flag = value == "Yes" || value == "yes" || value == "1" || value == "true";
        } else if (key == "SpaceAfter") {
          tok.space_after = value != "No";
        } else if (key == "TokenRange") {
          auto colon = value.find(':');
          if (colon == std::string_view::npos || !parse_size(value.substr(0, colon), tok.char_start) ||
              !parse_size(value.substr(colon + 1), tok.char_end) || tok.char_end <= tok.char_start)
            malformed(line_no, "bad TokenRange '" + std::string(value) + "'");
          has_range = true;
        }
      }
    }
    if (has_range) ++with_range;
    parsed.tokens.push_back(std::move(tok));
  }
  if (parsed.tokens.empty()) fail(ErrorCode::MalformedConllu, "sentence block has no tokens");
  const int n = static_cast<int>(parsed.tokens.size());
  for (const auto& t : parsed.tokens)
    if (t.head < 0 || t.head > n || t.head == t.index)
      fail(ErrorCode::MalformedConllu, "token " + std::to_string(t.index) + " has invalid head " + std::to_string(t.head));

  if (with_range == 0) {
    parsed.offsets_reconstructed = true;
    std::size_t pos = 0;
    for (auto& t : parsed.tokens) {
      t.char_start = pos;
      t.char_end = pos + t.surface.size();
      pos = t.char_end + (t.space_after ? 1 : 0);
    }
  } else if (with_range != n) {
    fail(ErrorCode::MalformedConllu, "TokenRange present on some tokens but not all");
  } else {
    for (std::size_t i = 1; i < parsed.tokens.size(); ++i)
      if (parsed.tokens[i].char_start < parsed.tokens[i - 1].char_end)
        fail(ErrorCode::MalformedConllu, "token offsets overlap or are out of order at token " + std::to_string(i + 1));
  }
  validate_tree(parsed.tokens);
  return parsed;
}

std::map<std::string, ParsedSentence> parse_conllu(std::string_view content) {
  std::map<std::string, ParsedSentence> out;
  std::string block;
  auto flush = [&] {
    if (is_blank(block)) {
      block.clear();
      return;
    }
    ParsedSentence parsed = ingest_parse(block);
    block.clear();
    if (parsed.sent_id.empty()) fail(ErrorCode::MalformedConllu, "sentence block without '# sent_id'");
    std::string id = parsed.sent_id;
    if (!out.emplace(id, std::move(parsed)).second)
      fail(ErrorCode::MalformedConllu, "duplicate sent_id '" + id + "'");
  };
  for (std::string_view line : split(content, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_blank(line)) {
      flush();
    } else {
      block.append(line);
      block.push_back('\n');
    }
  }
  flush();
  return out;
}

std::map<std::string, ParsedSentence> load_conllu(const std::filesystem::path& path) {
  return parse_conllu(io::read_file(path));
}

std::string to_conllu(const ParsedSentence& parsed) {
  std::ostringstream out;
  if (!parsed.sent_id.empty()) out << "# sent_id = " << parsed.sent_id << '\n';
  if (!parsed.text.empty()) out << "# text = " << parsed.text << '\n';
  for (const auto& t : parsed.tokens) {
    std::string misc = "TokenRange=" + std::to_string(t.char_start) + ":" + std::to_string(t.char_end);
    if (t.ne_flag) misc = "NE=Yes|" + misc;
    if (!t.space_after) misc += "|SpaceAfter=No";
    out << t.index << '\t' << t.surface << "\t_\t_\t_\t_\t" << t.head << '\t' << t.dep_tag << "\t_\t" << misc << '\n';
  }
  out << '\n';
  return out.str();
}

ParsedSentence anchor_to_text(const ParsedSentence& parsed, std::string_view text) {
  ParsedSentence out = parsed;
  out.text = std::string(text);
  out.offsets_reconstructed = false;
  std::size_t pos = 0;
  for (auto& t : out.tokens) {
    while (pos < text.size() && is_ws(text[pos])) ++pos;
    if (pos + t.surface.size() > text.size() || !equal_ignore_ascii_case(text.substr(pos, t.surface.size()), t.surface))
      fail(ErrorCode::SpanMismatch, "token " + std::to_string(t.index) + " '" + t.surface + "' not found at offset " +
                                        std::to_string(pos) + " of '" + std::string(text) + "'");
    t.char_start = pos;
    t.char_end = pos + t.surface.size();
    t.surface = std::string(text.substr(t.char_start, t.surface.size()));
    pos = t.char_end;
    t.space_after = pos < text.size() && is_ws(text[pos]);
  }
  return out;
}

ParsedSentence graft_metadata_parse(const ParsedSentence& claim_parse, const CombinedContext& context) {
  if (!context.uses_metadata || !context.source_span || !context.date_span)
    fail(ErrorCode::InvalidArgument, "grafting needs a metadata context");
  const std::string& text = context.text;
  ParsedSentence claim = anchor_to_text(
      claim_parse, std::string_view(text).substr(context.claim_span.start, context.claim_span.end - context.claim_span.start));

  auto source_words = words_in(text, *context.source_span);
  auto date_words = words_in(text, *context.date_span);
  const int S = static_cast<int>(source_words.size());
  const int D = static_cast<int>(date_words.size());
  const int reported = S + 1, on = S + 2, base = S + D + 3;

  ParsedSentence out;
  out.sent_id = context.claim_id + "#meta";
  out.text = text;
  auto push = [&](Span s, int head, std::string tag, bool ne) {
    Token t;
    t.index = static_cast<int>(out.tokens.size()) + 1;
    t.surface = text.substr(s.start, s.end - s.start);
    t.head = head;
    t.dep_tag = std::move(tag);
    t.ne_flag = ne;
    t.char_start = s.start;
    t.char_end = s.end;
    out.tokens.push_back(std::move(t));
  };
  auto find_word = [&](std::string_view word, std::size_t from) {
    std::size_t p = text.find(word, from);
    return Span{p, p + word.size()};
  };

  // Metadata fields name a publisher/speaker and a date, both entity-like.
  for (int i = 0; i < S; ++i) push(source_words[static_cast<std::size_t>(i)], i + 1 == S ? reported : S, i + 1 == S ? "nsubj" : "compound", true);
  Span rep = find_word("reported", context.source_span->end);
  push(rep, 0, "ROOT", false);
  push(find_word("on", rep.end), reported, "prep", false);
  for (int i = 0; i < D; ++i)
    push(date_words[static_cast<std::size_t>(i)], i + 1 == D ? on : S + 2 + D, i + 1 == D ? "pobj" : "compound", true);
  const int claim_root = claim.root_index();
  push(find_word("that", context.date_span->end), base + claim_root, "mark", false);
  for (const auto& t : claim.tokens) {
    Token g = t;
    g.index = base + t.index;
    g.char_start = t.char_start + context.claim_span.start;
    g.char_end = t.char_end + context.claim_span.start;
    if (t.head == 0) {
      g.head = reported;
      g.dep_tag = "ccomp";
    } else {
      g.head = base + t.head;
    }
    out.tokens.push_back(std::move(g));
  }
  validate_tree(out.tokens);
  return out;
}

std::string_view to_string(FocalOrigin origin) {
  switch (origin) {
    case FocalOrigin::Claim: return "claim";
    case FocalOrigin::MetadataSource: return "metadata_source";
    case FocalOrigin::MetadataDate: return "metadata_date";
  }
  return "claim";
}

FocalOrigin parse_focal_origin(std::string_view name) {
  if (name == "claim") return FocalOrigin::Claim;
  if (name == "metadata_source") return FocalOrigin::MetadataSource;
  if (name == "metadata_date") return FocalOrigin::MetadataDate;
  fail(ErrorCode::ParseError, "unknown focal origin '" + std::string(name) + "'");
}

FocalPointSet enumerate_focal_points(const ParsedSentence& parsed, const CombinedContext& context) {
  const auto& tokens = parsed.tokens;
  const std::size_t n = tokens.size();
  for (const auto& t : tokens) {
    if (t.char_end > context.text.size() ||
        std::string_view(context.text).substr(t.char_start, t.char_end - t.char_start) != t.surface)
      fail(ErrorCode::SpanMismatch, "token " + std::to_string(t.index) + " '" + t.surface + "' does not match context of claim '" +
                                        context.claim_id + "' at [" + std::to_string(t.char_start) + ", " +
                                        std::to_string(t.char_end) + ")");
  }

  std::vector<std::vector<std::size_t>> children(n);
  std::size_t root = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (tokens[i].head == 0)
      root = i;
    else
      children[static_cast<std::size_t>(tokens[i].head - 1)].push_back(i);
  }
  std::vector<std::size_t> left(n), right(n), depth(n, 0);
  std::function<void(std::size_t)> walk = [&](std::size_t u) {
    left[u] = right[u] = u;
    for (std::size_t c : children[u]) {
      depth[c] = depth[u] + 1;
      walk(c);
      left[u] = std::min(left[u], left[c]);
      right[u] = std::max(right[u], right[c]);
    }
  };
  walk(root);

  // Several tokens can share one window (single-child chains); the one
  // closest to the root names the span.
  std::map<Span, std::size_t> owner;
  for (std::size_t i = 0; i < n; ++i) {
    Span s{tokens[left[i]].char_start, tokens[right[i]].char_end};
    auto [it, inserted] = owner.emplace(s, i);
    if (!inserted && (depth[i] < depth[it->second] || (depth[i] == depth[it->second] && i < it->second))) it->second = i;
  }

  FocalPointSet set;
  set.claim_id = context.claim_id;
  set.context = context;
  std::map<Span, FocalPoint> points;
  for (const auto& [span, i] : owner) {
    FocalPoint p;
    p.char_start = span.start;
    p.char_end = span.end;
    p.text = context.text.substr(span.start, span.end - span.start);
    p.root_token_index = tokens[i].index;
    p.dep_tag = tokens[i].dep_tag;
    p.is_named_entity = true;
    for (std::size_t k = left[i]; k <= right[i]; ++k) p.is_named_entity = p.is_named_entity && tokens[k].ne_flag;
    points.emplace(span, std::move(p));
  }

  if (context.uses_metadata) {
    auto add_meta = [&](const std::optional<Span>& span, FocalOrigin origin) {
      if (!span || span->end <= span->start) return;
      auto it = points.find(*span);
      if (it != points.end()) {
        it->second.origin = origin;
        return;
      }
      FocalPoint p;
      p.char_start = span->start;
      p.char_end = span->end;
      p.text = context.text.substr(span->start, span->end - span->start);
      p.dep_tag = std::string(to_string(origin));
      bool any = false, all = true;
      for (const auto& t : tokens) {
        if (t.char_start >= span->start && t.char_end <= span->end) {
          any = true;
          all = all && t.ne_flag;
        }
      }
      p.is_named_entity = any && all;
      p.origin = origin;
      points.emplace(*span, std::move(p));
    };
    add_meta(context.source_span, FocalOrigin::MetadataSource);
    add_meta(context.date_span, FocalOrigin::MetadataDate);
  }

  set.points.reserve(points.size());
  for (auto& [span, p] : points) set.points.push_back(std::move(p));
  return set;
}

FocalPointSet filter_focal_points(const FocalPointSet& set, const FocalFilter& filter) {
  FocalPointSet out;
  out.claim_id = set.claim_id;
  out.context = set.context;
  for (const auto& p : set.points) {
    bool keep = false;
    switch (filter.kind) {
      case FocalFilter::Kind::NeOnly: keep = p.is_named_entity; break;
      case FocalFilter::Kind::NonNe: keep = !p.is_named_entity; break;
      case FocalFilter::Kind::Tags:
        keep = std::find(filter.tags.begin(), filter.tags.end(), p.dep_tag) != filter.tags.end();
        break;
    }
    if (keep) out.points.push_back(p);
  }
  return out;
}

CombinedContext plain_context(const Claim& claim) {
  Claim bare = claim;
  bare.source.reset();
  bare.date.reset();
  return render_metadata_template(bare);
}

FocalPointSet extract_focal_points(const Claim& claim, const std::map<std::string, ParsedSentence>& parses,
                                   bool use_metadata) {
  CombinedContext ctx = use_metadata ? render_metadata_template(claim) : plain_context(claim);
  auto find = [&](const std::string& key) -> const ParsedSentence* {
    auto it = parses.find(key);
    return it == parses.end() ? nullptr : &it->second;
  };
  ParsedSentence parse;
  if (ctx.uses_metadata) {
    if (const auto* combined = find(claim.id + "#meta")) {
      parse = combined->offsets_reconstructed ? anchor_to_text(*combined, ctx.text) : *combined;
    } else if (const auto* bare = find(claim.id)) {
      parse = graft_metadata_parse(*bare, ctx);
    } else {
      fail(ErrorCode::MissingParse, "no parse for claim '" + claim.id + "'");
    }
  } else {
    const auto* bare = find(claim.id);
    if (!bare) fail(ErrorCode::MissingParse, "no parse for claim '" + claim.id + "'");
    parse = bare->offsets_reconstructed ? anchor_to_text(*bare, ctx.text) : *bare;
  }
  return enumerate_focal_points(parse, ctx);
}

io::Json focal_point_to_json(const FocalPoint& point) {
  return io::Json{{"text", point.text},
                  {"span", {point.char_start, point.char_end}},
                  {"root", point.root_token_index},
                  {"dep_tag", point.dep_tag},
                  {"ne", point.is_named_entity},
                  {"origin", std::string(to_string(point.origin))}};
}

FocalPoint focal_point_from_json(const io::Json& j) {
  FocalPoint p;
  try {
    p.text = j.at("text").get<std::string>();
    p.char_start = j.at("span").at(0).get<std::size_t>();
    p.char_end = j.at("span").at(1).get<std::size_t>();
    p.root_token_index = j.value("root", 0);
    p.dep_tag = j.at("dep_tag").get<std::string>();
    p.is_named_entity = j.value("ne", false);
    p.origin = parse_focal_origin(j.value("origin", std::string("claim")));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad focal point record: ") + e.what());
  }
  return p;
}

}  // namespace focalqg
