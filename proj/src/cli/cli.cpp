#include "ipthunt/report/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/store.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/desk/corpus.hpp"
#include "ipthunt/desk/models.hpp"
#include "ipthunt/extract/contacts.hpp"
#include "ipthunt/hunter/hunt.hpp"
#include "ipthunt/infiltrate/html.hpp"
#include "ipthunt/infiltrate/site.hpp"
#include "ipthunt/infiltrate/telegram.hpp"
#include "ipthunt/report/language.hpp"
#include "ipthunt/report/tables.hpp"
#include "ipthunt/textfeat/features.hpp"

namespace ipthunt {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct GlobalOptions {
  std::string store = "store";
  std::string models = "models";
  std::string format = "text";
  std::string now;
  std::uint64_t seed = 7;
  std::size_t rate_tokens = 10;
  long rate_interval = 60;
  long rate_backoff = 30;
  std::size_t rate_retries = 3;
  bool quiet = false;
};

// logfmt progress lines on the error stream.
class Log {
 public:
  Log(std::ostream& err, bool quiet) : err_(err), quiet_(quiet) {}

  void event(const std::string& name, const std::vector<std::pair<std::string, std::string>>& fields = {}) const {
    if (quiet_) return;
    err_ << "event=" << name;
    for (const auto& [k, v] : fields) err_ << ' ' << k << '=' << quote(v);
    err_ << '\n';
  }

 private:
  static std::string quote(const std::string& v) {
    if (!v.empty() && v.find_first_of(" =\"\t\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
      if (c == '"' || c == '\\') out += '\\';
      out += c == '\n' ? ' ' : c;
    }
    return out + '"';
  }

  std::ostream& err_;
  bool quiet_;
};

std::string num(std::size_t n) { return std::to_string(n); }

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

std::vector<std::string> read_lines(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw StorageIoError("cannot read " + what + " file " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto trimmed = collapse_whitespace(line);
    if (!trimmed.empty() && trimmed[0] != '#') out.push_back(trimmed);
  }
  return out;
}

std::string shorten(const std::string& text, std::size_t max_scalars = 48) {
  const auto u = to_u32(text);
  if (u.size() <= max_scalars) return text;
  return to_utf8(std::u32string_view(u).substr(0, max_scalars - 3)) + "...";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string website_url(const std::string& value) {
  const auto lower = ascii_lower(value);
  if (lower.starts_with("http://") || lower.starts_with("https://")) return value;
  return "http://" + value;
}

class Context {
 public:
  Context(const GlobalOptions& g, std::ostream& out, std::ostream& err)
      : g_(g), out_(out), log_(err, g.quiet), format_(table_format_from_string(g.format)) {
    if (g.now.empty())
      clock_ = std::make_unique<SystemClock>();
    else
      clock_ = std::make_unique<VirtualClock>(parse_timestamp(g.now));
  }

  RecordStore& store() {
    if (!store_) store_ = std::make_unique<RecordStore>(g_.store);
    return *store_;
  }

  const desk::ModelBundle& models() {
    if (!models_) {
      if (!std::filesystem::exists(std::filesystem::path(g_.models) / "binary.json"))
        throw StorageIoError("no models in " + g_.models + " (run the train subcommand first)");
      models_ = std::make_unique<desk::ModelBundle>(desk::load_bundle(g_.models));
    }
    return *models_;
  }

  Clock& clock() { return *clock_; }
  const Log& log() const { return log_; }
  const GlobalOptions& options() const { return g_; }

  RateLimitPolicy policy() const {
    return {g_.rate_tokens, Duration{g_.rate_interval}, Duration{g_.rate_backoff}, g_.rate_retries};
  }

  void print(const ReportTable& t) {
    if (printed_) out_ << "\n";
    out_ << t.render(format_);
    printed_ = true;
  }

 private:
  const GlobalOptions& g_;
  std::ostream& out_;
  Log log_;
  TableFormat format_;
  std::unique_ptr<Clock> clock_;
  std::unique_ptr<RecordStore> store_;
  std::unique_ptr<desk::ModelBundle> models_;
  bool printed_ = false;
};

// ---- hunt ---------------------------------------------------------------------

struct SearchOptions {
  std::string corpus;
  std::string search_url;
  std::string engine = "google";
  std::size_t max_results = 100;
  bool site_filter = true;
};

void add_search_options(CLI::App* cmd, SearchOptions& o) {
  cmd->add_option("--corpus", o.corpus, "Mock search corpus (JSON lines of documents)");
  cmd->add_option("--search-url", o.search_url, "HTTP search gateway base URL (enables the live adapter)");
  cmd->add_option("--engine", o.engine, "Engine label for the HTTP adapter")
      ->check(CLI::IsMember({"google", "bing", "baidu", "sogou", "mock"}));
  cmd->add_option("--max-results", o.max_results, "Results requested per query")->check(CLI::PositiveNumber);
  cmd->add_flag("!--no-site-filter", o.site_filter, "The engine ignores site: filters");
}

struct Adapters {
  std::unique_ptr<MockSearchEngine> mock;
  std::unique_ptr<HttpSearchAdapter> http;
  std::unique_ptr<HttpFetchBackend> pages;
  std::vector<SearchEngineAdapter*> list;
  PageFetcher fetcher;
};

Adapters make_adapters(const SearchOptions& o, Context& ctx) {
  Adapters a;
  const AdapterCapabilities caps{o.site_filter, o.max_results};
  if (!o.corpus.empty()) {
    a.mock = std::make_unique<MockSearchEngine>(MockSearchEngine::load_corpus(o.corpus), ctx.clock(), caps);
    a.list.push_back(a.mock.get());
    a.fetcher = a.mock->fetcher();
  }
  if (!o.search_url.empty()) {
    a.http = std::make_unique<HttpSearchAdapter>(o.search_url, engine_from_string(o.engine), ctx.clock(), caps, true);
    a.list.push_back(a.http.get());
    if (!a.fetcher) {
      a.pages = std::make_unique<HttpFetchBackend>("default");
      auto* backend = a.pages.get();
      a.fetcher = [backend](const std::string& url) {
        const auto r = backend->get(url);
        if (r.status >= 400) throw NetworkError(url + ": HTTP " + std::to_string(r.status));
        return PageText{{ReflectionLocation::body_text, visible_text(r.body)}};
      };
    }
  }
  if (a.list.empty()) throw UsageError("no search adapter configured (use --corpus or --search-url)");
  return a;
}

struct HuntOptions {
  std::string seed_keywords;
  std::string seed_urs;
  std::size_t rounds = 6;
  std::size_t max_queries = 0;
  std::string state;
  bool resume = false;
  SearchOptions search;
};

ReportTable round_table(const std::vector<RoundSummary>& rounds) {
  ReportTable t;
  t.title = "Snowball rounds";
  t.columns = {"Round", "Queries", "Entries", "Reflections", "New IPTs", "New keywords", "New URSes", "Known IPTs",
               "Known URSes", "Errors"};
  for (const auto& r : rounds)
    t.rows.push_back({num(r.round), num(r.queries), num(r.entries), num(r.reflections), num(r.new_ipts),
                      num(r.new_keywords), num(r.new_urs), num(r.known_ipts), num(r.known_urs), num(r.errors.size())});
  return t;
}

void run_hunt(const HuntOptions& o, Context& ctx) {
  std::vector<std::string> keywords, urs;
  if (!o.seed_keywords.empty()) keywords = read_lines(o.seed_keywords, "seed keywords");
  if (!o.seed_urs.empty()) urs = read_lines(o.seed_urs, "seed URS");
  const bool resuming = o.resume && !o.state.empty() && std::filesystem::exists(o.state);
  if (!resuming && keywords.empty() && urs.empty())
    throw UsageError("hunt needs --seed-keywords or --seed-urs (or --resume with an existing --state)");
  auto adapters = make_adapters(o.search, ctx);
  const auto& models = ctx.models();
  Hunter hunter(adapters.list, adapters.fetcher, {models.binary, models.segment}, ctx.store(), ctx.clock(), ctx.policy());
  SnowballLimits limits;
  limits.max_rounds = o.rounds;
  if (o.max_queries > 0) limits.max_queries = o.max_queries;
  ctx.log().event("hunt.start", {{"keywords", num(keywords.size())}, {"urs", num(urs.size())},
                                 {"adapters", num(adapters.list.size())}, {"resume", resuming ? "true" : "false"}});
  SnowballResult result;
  if (resuming) {
    std::ifstream in(o.state);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error("bad hunt state " + o.state + ": " + e.what());
    }
    auto state = HuntState::from_json(j);
    for (const auto& k : keywords)
      if (!state.known_keywords.count(k)) state.keyword_frontier.push_back(k);
    result = hunter.resume(std::move(state), limits);
  } else {
    result = hunter.snowball_run(keywords, urs, limits);
  }
  for (const auto& r : result.rounds) {
    ctx.log().event("hunt.round", {{"round", num(r.round)}, {"queries", num(r.queries)}, {"new_ipts", num(r.new_ipts)},
                                   {"known_ipts", num(r.known_ipts)}, {"errors", num(r.errors.size())}});
    for (const auto& e : r.errors) ctx.log().event("hunt.error", {{"round", num(r.round)}, {"detail", e}});
  }
  if (!o.state.empty()) {
    std::ofstream out(o.state);
    if (!out) throw StorageIoError("cannot write hunt state " + o.state);
    out << result.state.to_json().dump(2) << '\n';
  }
  ctx.print(round_table(result.rounds));
}

// ---- classify / extract-contacts ---------------------------------------------

struct TextInput {
  std::vector<std::string> texts;
  std::string input;
};

void add_text_options(CLI::App* cmd, TextInput& in) {
  cmd->add_option("--text", in.texts, "Text to process (repeatable)");
  cmd->add_option("--input", in.input, "File with one text per line");
}

std::vector<std::string> gather_texts(const TextInput& in) {
  auto texts = in.texts;
  if (!in.input.empty())
    for (auto& l : read_lines(in.input, "input")) texts.push_back(std::move(l));
  return texts;
}

std::string category_names(const std::vector<CategoryLabel>& labels) {
  std::vector<std::string> names;
  for (auto c : labels) names.emplace_back(to_string(c));
  return join(names, "; ");
}

void run_classify(const TextInput& in, Context& ctx) {
  const auto& models = ctx.models();
  const auto texts = gather_texts(in);
  if (!texts.empty()) {
    ReportTable t;
    t.title = "Classification";
    t.columns = {"Text", "IPT score", "IPT", "Categories", "Language"};
    for (const auto& text : texts) {
      const auto features = binary_ipt_features(text).to_array();
      const bool ipt = models.binary.classify(features);
      t.rows.push_back({shorten(text), fixed(models.binary.positive_proba(features)), ipt ? "yes" : "no",
                        ipt ? category_names(models.categories.classify(text)) : "", tag_language(text)});
    }
    ctx.print(t);
    return;
  }
  auto& store = ctx.store();
  const auto records = store.query_as<IptRecord>();
  if (records.empty()) throw EmptyStore("no IPT records in " + store.dir().string());
  for (auto r : records) {
    r.categories = models.categories.classify(r.text);
    r.language = tag_language(r.text);
    store.append(r);
  }
  ctx.log().event("classify.done", {{"records", num(records.size())}});
  ctx.print(report_category_distribution(store));
}

void run_extract(const TextInput& in, Context& ctx) {
  const auto& models = ctx.models();
  const auto texts = gather_texts(in);
  if (!texts.empty()) {
    ReportTable t;
    t.title = "Contacts";
    t.columns = {"Text", "Kind", "Value", "Span"};
    for (const auto& text : texts)
      for (const auto& c : extract_contacts(text, models.contact_type))
        t.rows.push_back({shorten(text), std::string(to_string(c.kind)), c.value,
                          num(c.raw_span.start) + "-" + num(c.raw_span.end)});
    ctx.print(t);
    return;
  }
  auto& store = ctx.store();
  const auto records = store.query_as<IptRecord>();
  if (records.empty()) throw EmptyStore("no IPT records in " + store.dir().string());
  std::size_t found = 0;
  for (auto r : records) {
    r.contacts = extract_contacts(r, models.contact_type);
    for (const auto& c : r.contacts) store.append(c);
    found += r.contacts.size();
    store.append(r);
  }
  ctx.log().event("extract.done", {{"records", num(records.size())}, {"contacts", num(found)}});
  ctx.print(report_contacts(store));
}

// ---- infiltrate ---------------------------------------------------------------

struct InfiltrateOptions {
  std::string scenario;
  std::vector<std::string> vantages;
  std::vector<std::string> connect_to;
  std::string websites;
  std::size_t hop_cap = kDefaultHopCap;
  long courtesy_ms = 0;
  bool cloaking = false;
  std::size_t threads = 0;
};

void run_infiltrate(const InfiltrateOptions& o, Context& ctx) {
  auto& store = ctx.store();
  std::vector<std::string> sites;
  if (!o.websites.empty()) {
    sites = read_lines(o.websites, "websites");
  } else {
    std::set<std::string> seen;
    for (const auto& c : store.query_as<Contact>())
      if (c.kind == ContactKind::Website && seen.insert(website_url(c.value)).second) sites.push_back(website_url(c.value));
  }
  if (sites.empty()) throw EmptyStore("no websites to visit (use --websites or extract contacts first)");
  auto vantages = o.vantages.empty() ? std::vector<std::string>{"default"} : o.vantages;
  if (!o.connect_to.empty() && o.connect_to.size() != vantages.size())
    throw UsageError("--connect-to must be given once per --vantage");

  std::shared_ptr<const Scenario> scenario;
  if (!o.scenario.empty()) scenario = std::make_shared<Scenario>(Scenario::load(o.scenario));
  SnapshotOptions options;
  options.hop_cap = o.hop_cap;

  std::vector<SiteSnapshot> all;
  std::vector<std::unique_ptr<FetchBackend>> backends;
  for (std::size_t v = 0; v < vantages.size(); ++v) {
    if (scenario) {
      backends.push_back(std::make_unique<ScenarioBackend>(scenario, vantages[v]));
    } else {
      HttpFetchOptions h;
      if (!o.connect_to.empty()) h.connect_to = o.connect_to[v];
      h.courtesy_delay = std::chrono::milliseconds(o.courtesy_ms);
      backends.push_back(std::make_unique<HttpFetchBackend>(vantages[v], h));
    }
    auto snaps = snapshot_sites(sites, *backends.back(), ctx.clock().now(), options, o.threads);
    for (const auto& s : snaps) {
      store.append(s);
      ctx.log().event("infiltrate.snapshot", {{"website", s.website}, {"vantage", s.vantage},
                                              {"hops", num(s.chain.hops.size())}, {"landing", s.landing_fqdn},
                                              {"blocked", s.blocked ? "true" : "false"},
                                              {"unreachable", s.unreachable ? "true" : "false"}});
    }
    all.insert(all.end(), snaps.begin(), snaps.end());
  }

  ReportTable chains;
  chains.title = "Snapshots";
  chains.columns = {"Website", "Vantage", "Hops", "FQDNs", "Landing", "Status", "Flags"};
  for (const auto& s : all) {
    std::vector<std::string> flags;
    if (s.blocked) flags.push_back("blocked(" + s.block_evidence + ")");
    if (s.unreachable) flags.push_back("unreachable");
    if (s.chain.loop) flags.push_back("loop");
    if (s.chain.hop_cap_reached) flags.push_back("hop-cap");
    if (!s.iframe_sources.empty()) flags.push_back("iframes=" + num(s.iframe_sources.size()));
    chains.rows.push_back({s.website, s.vantage, num(s.chain.hops.size()), num(s.chain.distinct_fqdn_count),
                           s.landing_fqdn, num(static_cast<std::size_t>(std::max(0, s.landing_status))),
                           join(flags, " ")});
  }
  ctx.print(chains);

  if (o.cloaking) {
    ReportTable t;
    t.title = "Iframe cloaking";
    t.columns = {"Website", "Iframe", "Iframe apex", "Categories"};
    const auto& models = ctx.models();
    for (std::size_t i = 0; i < sites.size(); ++i) {
      std::vector<IframeFailure> failures;
      if (auto f = detect_iframe_cloaking(all[i], *backends[0], models.categories, &failures))
        t.rows.push_back({f->website, f->iframe_url, f->iframe_apex, category_names(f->iframe_categories)});
      for (const auto& e : failures) ctx.log().event("infiltrate.iframe_error", {{"url", e.url}, {"detail", e.error}});
    }
    ctx.print(t);
  }

  if (vantages.size() >= 2) {
    ReportTable t;
    t.title = "Vantage divergence (" + vantages[0] + " vs " + vantages[1] + ")";
    t.columns = {"Website", "Landing " + vantages[0], "Landing " + vantages[1], "Divergent", "Reason"};
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const auto d = compare_vantage(all[i], all[sites.size() + i]);
      std::vector<std::string> why;
      if (d.landing_differs) why.push_back("landing");
      if (d.content_differs) why.push_back("content");
      if (d.blocked_a != d.blocked_b) why.push_back(std::string("blocked at ") + (d.blocked_a ? d.vantage_a : d.vantage_b));
      if (d.unreachable_a != d.unreachable_b)
        why.push_back(std::string("unreachable at ") + (d.unreachable_a ? d.vantage_a : d.vantage_b));
      t.rows.push_back({d.website, d.landing_apex_a, d.landing_apex_b, d.divergent ? "yes" : "no", join(why, ", ")});
    }
    ctx.print(t);
  }
}

// ---- tg-fetch -----------------------------------------------------------------

struct TgOptions {
  std::string fixtures;
  std::vector<std::string> handles;
  std::string handles_file;
  int epoch = 0;
};

void run_tg_fetch(const TgOptions& o, Context& ctx) {
  auto& store = ctx.store();
  auto handles = o.handles;
  if (!o.handles_file.empty())
    for (auto& h : read_lines(o.handles_file, "handles")) handles.push_back(std::move(h));
  if (handles.empty()) {
    std::set<std::string> seen;
    for (const auto& c : store.query_as<Contact>())
      if (c.kind == ContactKind::Telegram && seen.insert(canonical_handle(c.value)).second) handles.push_back(c.value);
  }
  if (handles.empty()) throw EmptyStore("no Telegram handles (use --handle, --handles or extract contacts first)");
  auto transport = FixtureTransport::load(o.fixtures);
  transport.set_epoch(o.epoch);
  RateGovernor governor(ctx.policy(), ctx.clock());
  ReportTable t;
  t.title = "Telegram accounts";
  t.columns = {"Handle", "Kind", "Subscribers/members", "New messages", "Note"};
  std::size_t failed = 0;
  for (const auto& h : handles) {
    try {
      const auto r = tg_fetch(h, transport, store, governor, ctx.clock());
      t.rows.push_back({r.profile.handle, std::string(to_string(r.profile.kind)),
                        r.profile.subscriber_or_member_count ? std::to_string(*r.profile.subscriber_or_member_count) : "unknown",
                        num(r.new_messages.size()), ""});
      ctx.log().event("tg.fetch", {{"handle", r.profile.handle}, {"new_messages", num(r.new_messages.size())}});
    } catch (const UnknownHandle& e) {
      ++failed;
      t.rows.push_back({canonical_handle(h), "", "", "0", "unknown handle"});
      ctx.log().event("tg.unknown", {{"handle", h}});
    }
  }
  ctx.print(t);
  if (failed == handles.size()) throw UnknownHandle(join(handles, ", "));
}

// ---- train / eval -------------------------------------------------------------

struct TrainOptions {
  std::string out;
  std::string binary_data;
  std::string segment_data;
  std::string contact_type_data;
  std::string category_data;
  std::size_t trees = 0;
};

void run_train(const TrainOptions& o, Context& ctx) {
  const auto seed = ctx.options().seed;
  EnsembleParams p;
  p.seed = seed;
  if (o.trees > 0) p.n_estimators = o.trees;
  const auto binary = o.binary_data.empty() ? desk::binary_corpus(400, seed) : desk::read_binary_samples(o.binary_data);
  const auto segment = o.segment_data.empty() ? desk::segment_corpus(300, seed + 1) : desk::read_segment_samples(o.segment_data);
  const auto typed =
      o.contact_type_data.empty() ? desk::contact_type_corpus(60, seed + 2) : desk::read_typed_samples(o.contact_type_data);
  const auto categories = o.category_data.empty() ? desk::category_corpus(48, seed + 3) : read_labeled_jsonl(o.category_data);
  desk::ModelBundle b;
  b.binary = desk::train_binary_model(binary, p);
  ctx.log().event("train.model", {{"model", "binary"}, {"samples", num(binary.size())}});
  b.segment = desk::train_segment_model(segment, p);
  ctx.log().event("train.model", {{"model", "segment"}, {"samples", num(segment.size())}});
  b.contact_type = desk::train_contact_type_model(typed, p);
  ctx.log().event("train.model", {{"model", "contact_type"}, {"samples", num(typed.size())}});
  MultiLabelParams mp;
  mp.ensemble.seed = seed;
  if (o.trees > 0) mp.ensemble.n_estimators = o.trees;
  b.categories = train_multilabel(categories, mp);
  ctx.log().event("train.model", {{"model", "categories"}, {"samples", num(categories.size())}});
  const auto dir = o.out.empty() ? ctx.options().models : o.out;
  desk::save_bundle(b, dir);
  ReportTable t;
  t.title = "Trained models";
  t.columns = {"Model", "Samples", "Source"};
  auto source = [](const std::string& f) { return f.empty() ? std::string("synthetic") : f; };
  t.rows = {{"binary", num(binary.size()), source(o.binary_data)},
            {"segment", num(segment.size()), source(o.segment_data)},
            {"contact_type", num(typed.size()), source(o.contact_type_data)},
            {"categories", num(categories.size()), source(o.category_data)}};
  t.provenance = "saved to " + dir;
  ctx.print(t);
}

struct EvalOptions {
  std::string task = "binary";
  std::string data;
  std::size_t folds = 0;
};

ReportTable eval_table(const std::string& title, const EvalReport& r) {
  ReportTable t;
  t.title = title;
  t.columns = {"Label", "Precision", "Recall", "F1", "Support"};
  for (const auto& c : r.per_class)
    t.rows.push_back({c.label, fixed(c.precision), fixed(c.recall), fixed(c.f1), num(c.support())});
  if (r.per_class.size() > 1) t.rows.push_back({"micro", fixed(r.micro_precision), fixed(r.micro_recall), fixed(r.micro_f1), ""});
  t.provenance = num(r.samples) + " samples" + (r.lrap > 0 ? ", LRAP " + fixed(r.lrap) : "");
  return t;
}

void run_eval(const EvalOptions& o, Context& ctx) {
  const auto seed = ctx.options().seed;
  if (o.task == "binary") {
    const auto samples = o.data.empty() ? desk::binary_corpus(200, seed + 100) : desk::read_binary_samples(o.data);
    if (samples.empty()) throw EmptyEvaluationSet();
    if (o.folds > 0) {
      EnsembleParams p;
      p.seed = seed;
      ctx.print(eval_table(num(o.folds) + "-fold binary IPT classification", desk::cross_validate_binary(samples, o.folds, p, seed)));
      return;
    }
    const auto& model = ctx.models().binary;
    std::vector<bool> truth, predicted;
    std::vector<double> scores;
    for (const auto& s : samples) {
      const auto x = binary_ipt_features(s.text).to_array();
      truth.push_back(s.ipt);
      predicted.push_back(model.classify(x));
      scores.push_back(model.positive_proba(x));
    }
    ctx.print(eval_table("Binary IPT classification", evaluate_binary(truth, predicted, scores)));
    return;
  }
  if (o.folds > 0) throw UsageError("--folds is only supported for --task binary");
  const auto heldout = o.data.empty() ? desk::category_corpus(8, seed + 100) : read_labeled_jsonl(o.data);
  ctx.print(eval_table("Multi-label category classification", evaluate(ctx.models().categories, heldout)));
}

// ---- report / probe-exposure ---------------------------------------------------

struct ReportOptions {
  std::string kind = "categories";
  std::string ranking;
  std::size_t top = 20;
};

void run_report(const ReportOptions& o, Context& ctx) {
  auto& store = ctx.store();
  if (o.kind == "categories") {
    ctx.print(report_category_distribution(store));
  } else if (o.kind == "top-abused") {
    const auto r = report_top_abused(store, o.top);
    ctx.print(r.templates);
    ctx.print(r.template_coverage);
    ctx.print(r.domains);
    ctx.print(r.domain_coverage);
  } else if (o.kind == "popularity") {
    if (o.ranking.empty()) throw UsageError("report --kind popularity needs --ranking");
    ctx.print(report_popularity_overlap(store, std::filesystem::path(o.ranking)));
  } else if (o.kind == "languages") {
    ctx.print(report_languages(store));
  } else if (o.kind == "contacts") {
    ctx.print(report_contacts(store));
  } else if (o.kind == "redirects") {
    ctx.print(report_redirects(store));
  } else if (o.kind == "landings") {
    ctx.print(report_landings(store, o.top));
  } else if (o.kind == "telegram") {
    ctx.print(report_telegram(store, ctx.models().categories));
  }
}

// Routes every query of a wrapped adapter through a rate governor.
class GovernedAdapter final : public SearchEngineAdapter {
 public:
  GovernedAdapter(SearchEngineAdapter& inner, RateGovernor& governor) : inner_(inner), governor_(governor) {}
  std::string id() const override { return inner_.id(); }
  AdapterCapabilities capabilities() const override { return inner_.capabilities(); }
  std::vector<SearchResultEntry> query(const std::string& q) override {
    return governor_.run([&] { return inner_.query(q); });
  }

 private:
  SearchEngineAdapter& inner_;
  RateGovernor& governor_;
};

struct ProbeOptions {
  std::string keywords;
  std::vector<std::size_t> k{10, 20, 50, 100};
  SearchOptions search;
};

void run_probe(const ProbeOptions& o, Context& ctx) {
  const auto keywords = read_lines(o.keywords, "keywords");
  auto adapters = make_adapters(o.search, ctx);
  const auto& model = ctx.models().binary;
  ReportTable t;
  t.title = "IPT exposure in top search results";
  t.columns = {"Adapter", "Top k", "Poisoned keywords", "%Keywords", "IPTs"};
  for (auto* adapter : adapters.list) {
    RateGovernor governor(ctx.policy(), ctx.clock());
    GovernedAdapter governed(*adapter, governor);
    const auto r = exposure_probe(keywords, governed, o.k, model);
    for (const auto& row : r.rows)
      t.rows.push_back({adapter->id(), num(row.k), num(row.poisoned_queries), format_percent(row.poisoned_percent),
                        num(row.ipt_count)});
    for (const auto& s : r.skipped) ctx.log().event("probe.skipped", {{"adapter", adapter->id()}, {"detail", s}});
    t.provenance = num(r.keywords) + " keywords queried";
  }
  ctx.print(t);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discovers and profiles illicit promotion texts reflected by search engines.", "ipthunt"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML or INI file");

  GlobalOptions g;
  app.add_option("--store", g.store, "Record store directory")->capture_default_str();
  app.add_option("--models", g.models, "Model directory")->capture_default_str();
  app.add_option("--format", g.format, "Table format")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  app.add_option("--now", g.now, "Run on a virtual clock starting at this UTC time (YYYY-MM-DDTHH:MM:SSZ)");
  app.add_option("--seed", g.seed, "Seed for training and synthetic data")->capture_default_str();
  app.add_option("--rate-tokens", g.rate_tokens, "Requests allowed per rate interval")->check(CLI::PositiveNumber);
  app.add_option("--rate-interval", g.rate_interval, "Rate interval in seconds")->check(CLI::PositiveNumber);
  app.add_option("--rate-backoff", g.rate_backoff, "Back-off after a rate-limit response, in seconds")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--rate-retries", g.rate_retries, "Retries after a rate-limit response");
  app.add_flag("--quiet,-q", g.quiet, "Suppress progress lines");

  HuntOptions hunt;
  auto* hunt_cmd = app.add_subcommand("hunt", "Snowball search for reflected IPTs from seed keywords and URSes");
  hunt_cmd->add_option("--seed-keywords", hunt.seed_keywords, "File with one seed keyword per line");
  hunt_cmd->add_option("--seed-urs", hunt.seed_urs, "File with one seed URS template per line");
  hunt_cmd->add_option("--rounds", hunt.rounds, "Maximum rounds")->capture_default_str();
  hunt_cmd->add_option("--max-queries", hunt.max_queries, "Query budget (0 = unlimited)");
  hunt_cmd->add_option("--state", hunt.state, "Hunt state file, written after the run");
  hunt_cmd->add_flag("--resume", hunt.resume, "Continue from --state when it exists");
  add_search_options(hunt_cmd, hunt.search);

  TextInput classify_in;
  auto* classify_cmd = app.add_subcommand("classify", "Classify texts, or every stored IPT when no text is given");
  add_text_options(classify_cmd, classify_in);

  TextInput extract_in;
  auto* extract_cmd = app.add_subcommand("extract-contacts", "Extract contacts from texts or stored IPTs");
  add_text_options(extract_cmd, extract_in);

  InfiltrateOptions infiltrate;
  auto* infiltrate_cmd = app.add_subcommand("infiltrate", "Snapshot promoted websites");
  infiltrate_cmd->add_option("--scenario", infiltrate.scenario, "Serve pages from a scenario file instead of HTTP");
  infiltrate_cmd->add_option("--vantage", infiltrate.vantages, "Vantage label (repeatable)");
  infiltrate_cmd->add_option("--connect-to", infiltrate.connect_to, "host:port per vantage for HTTP fetches");
  infiltrate_cmd->add_option("--websites", infiltrate.websites, "File with one website per line (default: stored contacts)");
  infiltrate_cmd->add_option("--hop-cap", infiltrate.hop_cap, "Maximum hops per chain")->check(CLI::PositiveNumber);
  infiltrate_cmd->add_option("--courtesy-ms", infiltrate.courtesy_ms, "Delay between requests to one host");
  infiltrate_cmd->add_option("--threads", infiltrate.threads, "Concurrent websites (0 = hardware)");
  infiltrate_cmd->add_flag("--cloaking", infiltrate.cloaking, "Check iframes for cloaked illicit content");

  TgOptions tg;
  auto* tg_cmd = app.add_subcommand("tg-fetch", "Fetch Telegram profiles and new messages");
  tg_cmd->add_option("--fixtures", tg.fixtures, "Transport fixture file or directory")->required();
  tg_cmd->add_option("--handle", tg.handles, "Account handle (repeatable)");
  tg_cmd->add_option("--handles", tg.handles_file, "File with one handle per line");
  tg_cmd->add_option("--epoch", tg.epoch, "Fixture epoch to expose");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train all models (synthetic corpora unless data files are given)");
  train_cmd->add_option("--out", train.out, "Output directory (default: --models)");
  train_cmd->add_option("--binary-data", train.binary_data, "JSON lines {text, ipt}");
  train_cmd->add_option("--segment-data", train.segment_data, "JSON lines {text, contact}");
  train_cmd->add_option("--contact-type-data", train.contact_type_data, "JSON lines {text, kind}");
  train_cmd->add_option("--category-data", train.category_data, "JSON lines {text, labels}");
  train_cmd->add_option("--trees", train.trees, "Trees per forest (0 = default)");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate models on labeled data");
  eval_cmd->add_option("--task", eval.task, "Model to evaluate")->check(CLI::IsMember({"binary", "categories"}))->capture_default_str();
  eval_cmd->add_option("--data", eval.data, "Labeled JSON lines (default: synthetic held-out corpus)");
  eval_cmd->add_option("--folds", eval.folds, "Cross-validate with k folds instead of using the saved model");

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Print measurement tables from the store");
  report_cmd->add_option("--kind", report.kind, "Report kind")
      ->check(CLI::IsMember({"categories", "top-abused", "popularity", "languages", "contacts", "redirects", "landings",
                             "telegram"}))
      ->capture_default_str();
  report_cmd->add_option("--ranking", report.ranking, "Popularity ranking, one apex domain per line");
  report_cmd->add_option("--top", report.top, "Rows per table")->capture_default_str();

  ProbeOptions probe;
  auto* probe_cmd = app.add_subcommand("probe-exposure", "Measure IPTs among top results for plain keywords");
  probe_cmd->add_option("--keywords", probe.keywords, "File with one keyword per line")->required();
  probe_cmd->add_option("--k", probe.k, "Result depths, ascending")->delimiter(',');
  add_search_options(probe_cmd, probe.search);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Context ctx(g, out, err);
    if (*hunt_cmd) run_hunt(hunt, ctx);
    else if (*classify_cmd) run_classify(classify_in, ctx);
    else if (*extract_cmd) run_extract(extract_in, ctx);
    else if (*infiltrate_cmd) run_infiltrate(infiltrate, ctx);
    else if (*tg_cmd) run_tg_fetch(tg, ctx);
    else if (*train_cmd) run_train(train, ctx);
    else if (*eval_cmd) run_eval(eval, ctx);
    else if (*report_cmd) run_report(report, ctx);
    else if (*probe_cmd) run_probe(probe, ctx);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, out, err);
}

}  // namespace ipthunt
