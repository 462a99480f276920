#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "convbrowse/crawler.hpp"
#include "convbrowse/dialog.hpp"
#include "convbrowse/eval.hpp"
#include "convbrowse/fetch.hpp"
#include "convbrowse/heuristics.hpp"
#include "convbrowse/nlu.hpp"
#include "convbrowse/serialize.hpp"
#include "convbrowse/service.hpp"
#include "convbrowse/site_model.hpp"
#include "convbrowse/text.hpp"
#include "convbrowse/url.hpp"

using namespace convbrowse;

namespace {

struct CommonOptions {
  std::string fixtures;
  std::string cache_dir;
  bool no_cache = false;
  double ttl_hours = 24.0;
  int depth = 3;
  int max_pages = 100;
  int workers = 4;
  std::string weights;
  std::optional<int> threshold;
  std::string popularity_mode;
  std::string cutoff;
};

void add_crawl_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--depth", o.depth, "Maximum crawl depth")->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-pages", o.max_pages, "Maximum pages to crawl")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", o.workers, "Parallel fetch workers")->check(CLI::PositiveNumber);
}

void add_offering_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--weights", o.weights, "key=value file with region weights and settings")->check(CLI::ExistingFile);
  cmd->add_option("--threshold", o.threshold, "Maximum offerings returned")->check(CLI::PositiveNumber);
  cmd->add_option("--popularity", o.popularity_mode, "occurrences or distinct_pages")
      ->check(CLI::IsMember({"occurrences", "distinct_pages"}));
  cmd->add_option("--cutoff", o.cutoff, "static or score_gap")->check(CLI::IsMember({"static", "score_gap"}));
}

void add_fetch_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--fixtures", o.fixtures, "Corpus manifest whose sites are served from disk")
      ->check(CLI::ExistingFile);
  cmd->add_option("--cache-dir", o.cache_dir, "Document cache directory");
  cmd->add_flag("--no-cache", o.no_cache, "Fetch without the document cache");
  cmd->add_option("--ttl-hours", o.ttl_hours, "Cache entry lifetime in hours")->check(CLI::PositiveNumber);
}

OfferingsConfig offerings_config(const CommonOptions& o) {
  OfferingsConfig c;
  if (!o.weights.empty()) {
    std::ifstream in(o.weights);
    apply_config_lines(c, in);
  }
  if (o.threshold) c.threshold = *o.threshold;
  if (!o.popularity_mode.empty()) apply_config_entry(c, "popularity_mode", o.popularity_mode);
  if (!o.cutoff.empty()) apply_config_entry(c, "cutoff", o.cutoff);
  c.validate();
  return c;
}

CrawlConfig crawl_config(const CommonOptions& o) {
  CrawlConfig c;
  c.max_depth = o.depth;
  c.max_pages = o.max_pages;
  c.worker_count = o.workers;
  c.ttl_seconds = static_cast<std::int64_t>(o.ttl_hours * 3600);
  c.validate();
  return c;
}

struct Environment {
  std::shared_ptr<CachedFetcher> fetcher;
  std::optional<CorpusManifest> corpus;
};

Environment make_environment(const CommonOptions& o) {
  Environment env;
  std::shared_ptr<Transport> transport = std::make_shared<HttpTransport>();
  if (!o.fixtures.empty()) {
    env.corpus = load_manifest(o.fixtures);
    auto dir = std::make_shared<DirectoryTransport>(transport);
    for (const auto& site : env.corpus->sites) dir->add_site(parse_url(site.seed).origin(), site.root);
    transport = dir;
  }
  auto fetcher = std::make_shared<StaticFetcher>(transport, FetchConfig{});
  std::optional<DocumentCache> cache;
  if (!o.no_cache) cache.emplace(o.cache_dir.empty() ? DocumentCache::default_root() : std::filesystem::path(o.cache_dir));
  env.fetcher = std::make_shared<CachedFetcher>(fetcher, std::move(cache),
                                                static_cast<std::int64_t>(o.ttl_hours * 3600));
  return env;
}

std::shared_ptr<Browser> make_browser(const CommonOptions& o, const Environment& env) {
  auto browser = std::make_shared<Browser>(env.fetcher, crawl_config(o), offerings_config(o));
  if (env.corpus) {
    for (const auto& site : env.corpus->sites) {
      browser->add_site_name(site.id, site.seed);
      try {
        auto title = extract_title(env.fetcher->cached_fetch(site.seed));
        if (!title.empty()) browser->add_site_name(title, site.seed);
      } catch (const std::exception&) {
      }
    }
  }
  return browser;
}

int run_crawl(const CommonOptions& o, const std::string& seed, const std::string& out_file, bool json) {
  auto env = make_environment(o);
  CrawlConfig config = crawl_config(o);
  config.seed = seed;
  auto fetcher = env.fetcher;
  Crawler crawler([fetcher](const std::string& url) { return fetcher->cached_fetch(url); });
  auto graph = build_graph(crawler.crawl(config), config, system_now());
  if (!out_file.empty()) {
    std::ofstream out(out_file);
    if (!out) throw std::runtime_error("cannot write " + out_file);
    save_graph(graph, out);
  }
  auto stats = compute_popularity(graph);
  auto offerings = rank_offerings(graph, stats, offerings_config(o));
  if (json) {
    Json arr = Json::array();
    for (const auto& off : offerings) arr.push_back(to_json(off));
    std::cout << Json{{"seed", graph.seed()}, {"pages", graph.nodes().size()}, {"offerings", arr}}.dump(2) << '\n';
    return 0;
  }
  std::cout << "crawled " << graph.nodes().size() << " pages, " << graph.edges().size() << " links from "
            << graph.seed() << '\n';
  for (const auto& n : graph.nodes()) {
    if (n.fetch_status < 200 || n.fetch_status >= 300) {
      std::cout << "  failed: " << n.url << " (status " << n.fetch_status << ")\n";
    }
  }
  std::cout << "offerings:\n";
  for (const auto& off : offerings) {
    std::cout << "  " << off.rank << ". " << off.label << "  " << off.target_url << "  (" << off.score << ")\n";
  }
  return 0;
}

std::vector<int> parse_sweep(const std::string& list) {
  std::vector<int> out;
  for (const auto& part : split(list, ',')) {
    auto t = trim(part);
    if (t.empty()) continue;
    try {
      out.push_back(std::stoi(t));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--sweep", "expected comma-separated integers, got '" + list + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError("--sweep", "threshold list is empty");
  return out;
}

int run_eval_cmd(const CommonOptions& o, const std::string& manifest_file, const std::string& sweep, bool oracle,
                 bool json, bool depth_set, bool pages_set) {
  auto manifest = load_manifest(manifest_file);
  CrawlConfig crawl = corpus_crawl_config(manifest, crawl_config(o));
  if (depth_set) crawl.max_depth = o.depth;
  if (pages_set) crawl.max_pages = o.max_pages;
  auto config = offerings_config(o);
  if (!sweep.empty()) {
    auto rows = sweep_threshold(manifest, parse_sweep(sweep), config, crawl);
    std::cout << (json ? sweep_json(rows) + "\n" : render_sweep_table(rows));
    return 0;
  }
  EvalReport report = oracle ? evaluate_corpus(crawl_corpus(manifest, crawl), config, crawl, true)
                             : run_eval(manifest, config, crawl);
  std::cout << (json ? report_json(report) + "\n" : render_table(report));
  return 0;
}

int run_grammar() {
  const auto& rules = rule_table();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    std::cout << i + 1 << ". " << to_string(r.kind) << "  \"" << r.example << "\"\n";
    std::cout << "   pattern: " << r.pattern << '\n';
    if (!r.capture_slots.empty()) {
      std::cout << "   captures:";
      for (const auto& s : r.capture_slots) std::cout << ' ' << s;
      std::cout << '\n';
    }
    for (const auto& [k, v] : r.fixed_slots) std::cout << "   sets: " << k << '=' << v << '\n';
  }
  return 0;
}

int run_repl(const CommonOptions& o, const std::string& seed, const std::string& script) {
  auto env = make_environment(o);
  auto browser = make_browser(o, env);
  std::string resolved = seed;
  if (auto named = browser->resolve_site_name(seed)) resolved = *named;
  std::unique_ptr<Session> session;
  try {
    session = open_session(browser, resolved, "repl");
  } catch (const SessionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::ifstream script_in;
  if (!script.empty()) {
    script_in.open(script);
    if (!script_in) {
      std::cerr << "error: cannot read script " << script << '\n';
      return 1;
    }
  }
  std::istream& in = script.empty() ? std::cin : script_in;
  const bool interactive = script.empty();
  if (interactive) std::cout << "Opened " << session->site().title << ". Say help for commands, quit to exit.\n";
  std::string line;
  while (true) {
    if (interactive) std::cout << "> " << std::flush;
    if (!std::getline(in, line)) break;
    std::string utterance = trim(line);
    if (!interactive && (utterance.empty() || utterance[0] == '#')) continue;
    if (utterance.rfind("U: ", 0) == 0) utterance = trim(utterance.substr(3));
    if (iequals(utterance, "quit") || iequals(utterance, "exit")) break;
    if (utterance.empty()) continue;
    Response r = session->handle(utterance);
    if (interactive) {
      std::string lines = transcript_lines(utterance, r);
      std::cout << lines.substr(lines.find('\n') + 1);
    } else {
      std::cout << transcript_lines(utterance, r);
    }
  }
  return 0;
}

int run_serve(const CommonOptions& o, const std::string& host, int port, double timeout_min) {
  auto env = make_environment(o);
  auto browser = make_browser(o, env);
  SessionService service(browser, std::chrono::milliseconds(static_cast<std::int64_t>(timeout_min * 60000)));
  ApiServer server(service);
  std::cout << "listening on http://" << host << ':' << port << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conversational browsing: crawl sites, rank their offerings, and talk to them."};
  app.require_subcommand(1);
  CommonOptions o;

  auto* crawl = app.add_subcommand("crawl", "Crawl a site and print its ranked offerings");
  std::string crawl_seed, crawl_out;
  bool crawl_json = false;
  crawl->add_option("seed", crawl_seed, "Seed URL")->required();
  crawl->add_option("--out", crawl_out, "Write the navigation graph to this file");
  crawl->add_flag("--json", crawl_json, "Print JSON");
  add_crawl_flags(crawl, o);
  add_offering_flags(crawl, o);
  add_fetch_flags(crawl, o);

  auto* eval = app.add_subcommand("eval", "Score the offerings heuristic against a fixture corpus");
  std::string manifest, sweep;
  bool oracle = false, eval_json = false;
  eval->add_option("manifest", manifest, "Corpus manifest JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--sweep", sweep, "Comma-separated thresholds, e.g. 5,10,20,30");
  eval->add_flag("--oracle", oracle, "Use each site's truth size as its threshold");
  eval->add_flag("--json", eval_json, "Print JSON");
  auto* eval_depth = eval->add_option("--depth", o.depth, "Maximum crawl depth")->check(CLI::NonNegativeNumber);
  auto* eval_pages = eval->add_option("--max-pages", o.max_pages, "Maximum pages per site")->check(CLI::PositiveNumber);
  add_offering_flags(eval, o);

  app.add_subcommand("grammar", "Print the intent grammar");

  auto* repl = app.add_subcommand("repl", "Talk to a site");
  std::string repl_seed, script;
  repl->add_option("seed", repl_seed, "Seed URL or fixture site name")->required();
  repl->add_option("--script", script, "Replay utterances from a file and print the transcript")
      ->check(CLI::ExistingFile);
  add_crawl_flags(repl, o);
  add_offering_flags(repl, o);
  add_fetch_flags(repl, o);

  auto* serve = app.add_subcommand("serve", "Run the HTTP session API");
  std::string host = "127.0.0.1";
  int port = 8080;
  double timeout_min = 30;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--session-timeout-min", timeout_min, "Idle minutes before a session expires")
      ->check(CLI::PositiveNumber);
  add_crawl_flags(serve, o);
  add_offering_flags(serve, o);
  add_fetch_flags(serve, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*crawl) return run_crawl(o, crawl_seed, crawl_out, crawl_json);
    if (*eval) return run_eval_cmd(o, manifest, sweep, oracle, eval_json, eval_depth->count() > 0,
                                   eval_pages->count() > 0);
    if (app.got_subcommand("grammar")) return run_grammar();
    if (*repl) return run_repl(o, repl_seed, script);
    if (*serve) return run_serve(o, host, port, timeout_min);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
