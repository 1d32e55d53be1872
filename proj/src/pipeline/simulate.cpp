#include "govmine/pipeline/simulate.hpp"

#include <array>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "govmine/core/digest.hpp"
#include "govmine/core/error.hpp"
#include "govmine/core/random.hpp"
#include "govmine/ingest/corpus.hpp"
#include "govmine/ingest/identity.hpp"
#include "govmine/ingest/mbox.hpp"
#include "govmine/ingest/threads.hpp"
#include "govmine/institutional/annotations.hpp"
#include "govmine/institutional/synthetic.hpp"

namespace govmine::pipeline {

namespace fs = std::filesystem;
using ingest::Role;

namespace {

constexpr std::array<std::string_view, 6> kProjectNames{"alpha", "beta", "gamma", "delta", "epsilon", "zeta"};
constexpr std::array<std::string_view, 18> kPeople{
    "Ann Lee",    "Bo Chen",   "Cara Diaz", "Dev Patel", "Eli Stone", "Fay Wong",
    "Gus Hale",   "Hana Ito",  "Ivo Petrov", "Jo Park",  "Kai Berg",  "Lin Zhou",
    "Max Roy",    "Nia Okoro", "Oli Grant", "Pia Laine", "Quin Ross", "Rui Sato"};
constexpr std::array<std::string_view, 8> kTopics{
    "release plan",   "build system", "website refresh", "graduation checklist",
    "new committers", "license review", "roadmap",       "documentation"};
constexpr std::array<std::string_view, 6> kSignoffs{"Thanks", "Cheers", "Best", "Regards", "Thanks all", "Best regards"};

struct Person {
    std::string name;
    std::string address;
    Role role = Role::Contributor;
    std::optional<int> promoted_at;  // month of promotion to committer
    std::optional<std::string> alias;
};

struct Message {
    std::string id;
    std::string list;
    Timestamp sent_at{};
    const Person* from = nullptr;
    std::string from_header;
    std::vector<std::string> cc;
    std::optional<std::string> parent;
    std::string subject;
    std::string text;  // plain body without quotes
    std::string raw;   // full message
};

std::string first_lower(std::string_view name) {
    std::string s(name.substr(0, name.find(' ')));
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string email_of(std::string_view name, std::string_view domain) {
    std::string s;
    for (char c : name) s += c == ' ' ? '.' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s + "@" + std::string(domain);
}

std::string base64(std::string_view data) {
    std::string out(4 * ((data.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(data.data()), static_cast<int>(data.size()));
    out.resize(static_cast<std::size_t>(n));
    std::string wrapped;
    for (std::size_t i = 0; i < out.size(); i += 76) wrapped += out.substr(i, 76) + "\n";
    return wrapped;
}

std::string quoted_printable(std::string_view text) {
    std::string out;
    std::size_t col = 0;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        std::string piece;
        if (c == '\n') {
            out += '\n';
            col = 0;
            continue;
        }
        if (c == '=' || c >= 0x80) piece = fmt::format("={:02X}", c);
        else piece = std::string(1, ch);
        if (col + piece.size() > 75) {
            out += "=\n";
            col = 0;
        }
        out += piece;
        col += piece.size();
    }
    return out;
}

std::string html_body(std::string_view text) {
    std::string out = "<html><body>";
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find("\n\n", start);
        auto para = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        std::string esc;
        for (char c : para) {
            if (c == '&') esc += "&amp;";
            else if (c == '<') esc += "&lt;";
            else if (c == '>') esc += "&gt;";
            else if (c == '\n') esc += "<br>";
            else esc += c;
        }
        out += "<p>" + esc + "</p>";
        if (end == std::string_view::npos) break;
        start = end + 2;
    }
    return out + "</body></html>";
}

std::string mbox_from_line(std::string_view address, Timestamp t) {
    static constexpr std::array<std::string_view, 7> kDays{"Thu", "Fri", "Sat", "Sun", "Mon", "Tue", "Wed"};
    static constexpr std::array<std::string_view, 12> kMonths{"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                              "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    const auto days = std::chrono::floor<std::chrono::days>(t);
    const auto secs = (t - days).count();
    const auto d = to_civil(t);
    return fmt::format("From {} {} {} {:2d} {:02d}:{:02d}:{:02d} {}", address,
                       kDays[static_cast<std::size_t>(((days.time_since_epoch().count() % 7) + 7) % 7)],
                       kMonths[static_cast<std::size_t>(d.month - 1)], d.day, secs / 3600, (secs / 60) % 60, secs % 60,
                       d.year);
}

}  // namespace

std::string format_rfc2822(Timestamp t) {
    static constexpr std::array<std::string_view, 7> kDays{"Thu", "Fri", "Sat", "Sun", "Mon", "Tue", "Wed"};
    static constexpr std::array<std::string_view, 12> kMonths{"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                              "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    const auto days = std::chrono::floor<std::chrono::days>(t);
    const auto secs = (t - days).count();
    const auto d = to_civil(t);
    return fmt::format("{}, {:02d} {} {} {:02d}:{:02d}:{:02d} +0000",
                       kDays[static_cast<std::size_t>(((days.time_since_epoch().count() % 7) + 7) % 7)], d.day,
                       kMonths[static_cast<std::size_t>(d.month - 1)], d.year, secs / 3600, (secs / 60) % 60,
                       secs % 60);
}

SimulationSummary simulate_corpus(const fs::path& dir, const SimulationOptions& options) {
    if (options.projects < 1 || options.projects > static_cast<int>(kProjectNames.size()))
        throw PreconditionError("simulate supports 1.." + std::to_string(kProjectNames.size()) + " projects");
    fs::create_directories(dir);
    rnd::Engine rng(options.seed);
    institutional::SentenceSynth synth(options.seed ^ 0x5eedULL);
    SimulationSummary summary;

    std::ofstream projects_csv(dir / "projects.csv", std::ios::binary);
    std::ofstream roster_csv(dir / "roster.csv", std::ios::binary);
    std::ofstream aliases_csv(dir / "aliases.csv", std::ios::binary);
    projects_csv << "project_id,outcome,incubation_start,incubation_end\n";
    roster_csv << "project_id,identity_key,role,since\n";
    aliases_csv << "alias,canonical\n";

    std::map<std::string, bool> sentence_label;  // generated text -> IS
    std::map<std::string, std::vector<std::string>> project_threads;
    std::vector<std::pair<std::string, fs::path>> mbox_files;

    for (int pi = 0; pi < options.projects; ++pi) {
        const std::string project(kProjectNames[static_cast<std::size_t>(pi)]);
        const bool graduated = pi % 3 != 2;
        const int months = 36 + rnd::between(rng, 0, 12);
        const CivilDate start{2017 + pi % 3, static_cast<unsigned>(1 + rnd::between(rng, 0, 11)), 1};
        const CivilDate end = civil_from_days(days_from_civil(add_months(start, months)) - 1);
        projects_csv << project << ',' << (graduated ? "graduated" : "retired") << ',' << format_iso_date(start) << ','
                     << format_iso_date(end) << '\n';

        // People: 2 mentors, 3 committers, 5 contributors.
        std::vector<std::size_t> idx(kPeople.size());
        std::iota(idx.begin(), idx.end(), 0);
        rnd::shuffle(idx.begin(), idx.end(), rng);
        std::vector<Person> people;
        for (std::size_t i = 0; i < 10; ++i) {
            Person p;
            p.name = kPeople[idx[i]];
            p.role = i < 2 ? Role::Mentor : i < 5 ? Role::Committer : Role::Contributor;
            p.address = email_of(p.name, p.role == Role::Contributor ? "example.org" : "apache.org");
            people.push_back(std::move(p));
        }
        people[5].promoted_at = 6 + rnd::between(rng, 0, 4);
        people[6].alias = first_lower(people[6].name) + "@users.example.net";
        for (const auto& p : people) {
            roster_csv << project << ',' << p.address << ',' << ingest::to_string(p.role) << ",\n";
            if (p.promoted_at)
                roster_csv << project << ',' << p.address << ",committer,"
                           << format_iso_date(add_months(start, *p.promoted_at)) << '\n';
            if (p.alias && pi == 0) aliases_csv << *p.alias << ',' << p.address << '\n';
        }
        if (pi != 0) people[6].alias.reset();

        auto role_at = [&](const Person& p, int month) {
            return p.promoted_at && month >= *p.promoted_at ? Role::Committer : p.role;
        };
        auto pick_person = [&](int month, const Person* not_this) -> const Person& {
            for (;;) {
                const auto& p = people[rnd::index(rng, people.size())];
                if (&p == not_this) continue;
                const Role r = role_at(p, month);
                const double w = r == Role::Mentor ? 0.5 : r == Role::Committer ? 1.0 : 0.7;
                if (rnd::bernoulli(rng, w)) return p;
            }
        };

        // Inactive months: none for the first project, interior gaps for the others.
        std::set<int> inactive;
        if (pi > 0) inactive.insert(3 + rnd::between(rng, 0, months - 8));
        if (!graduated) inactive.insert(months - 4);

        std::vector<Message> messages;
        std::vector<nlohmann::json> commits;
        double activity = 1.0;
        std::size_t counter = 0;
        const auto t0 = make_timestamp(start);
        for (int m = 0; m < months; ++m) {
            activity = std::max(0.2, 0.3 * activity + 0.7 + 0.35 * rnd::normal(rng) - (graduated ? 0.0 : 0.01 * m));
            if (inactive.count(m)) continue;
            const auto month_start = make_timestamp(add_months(start, m));
            const auto month_secs = (make_timestamp(add_months(start, m + 1)) - month_start).count();
            auto random_time = [&] {
                return month_start + std::chrono::seconds(static_cast<long>(rnd::uniform(rng) * 0.8 * static_cast<double>(month_secs)));
            };

            const int threads = 1 + rnd::poisson(rng, 1.5 + 3.0 * activity);
            for (int th = 0; th < threads; ++th) {
                const std::string list = (pi == 0 && rnd::bernoulli(rng, 0.15)) ? "user" : "dev";
                const bool vote = rnd::bernoulli(rng, 0.2);
                const std::string topic(kTopics[rnd::index(rng, kTopics.size())]);
                const std::string subject = vote ? "[VOTE] " + topic : "[DISCUSS] " + topic;
                const int length = rnd::between(rng, 1, 5);
                Timestamp when = random_time();
                const Message* parent = nullptr;
                std::vector<std::size_t> thread_msgs;
                for (int k = 0; k < length; ++k) {
                    Message msg;
                    msg.list = list;
                    msg.sent_at = when;
                    msg.from = &pick_person(m, parent ? parent->from : nullptr);
                    msg.id = fmt::format("{}.{}.{}@{}.example.org", project, m, counter++, list);
                    msg.subject = parent ? "Re: " + subject : subject;
                    if (parent) msg.parent = parent->id;
                    const Role r = role_at(*msg.from, m);
                    const double is_rate = (r == Role::Mentor ? 0.35 : r == Role::Committer ? 0.18 : 0.08) +
                                           (vote ? 0.15 : 0.0);
                    const int n = rnd::between(rng, 2, 6);
                    std::string body;
                    for (int s = 0; s < n; ++s) {
                        const bool pos = rnd::bernoulli(rng, is_rate);
                        const std::string sentence = pos ? synth.positive() : synth.negative();
                        sentence_label[sentence] = pos;
                        if (s) body += (s == n / 2 && n > 3) ? "\n\n" : " ";
                        body += sentence;
                    }
                    if (rnd::bernoulli(rng, 0.4))
                        body += "\n\n" + std::string(kSignoffs[rnd::index(rng, kSignoffs.size())]) + ",\n" +
                                first_lower(msg.from->name);
                    msg.text = body;
                    if (rnd::bernoulli(rng, 0.2)) msg.cc.push_back(pick_person(m, msg.from).address);
                    const bool use_alias = msg.from->alias && rnd::bernoulli(rng, 0.5);
                    msg.from_header = fmt::format("{} <{}>", msg.from->name, use_alias ? *msg.from->alias : msg.from->address);
                    messages.push_back(std::move(msg));
                    thread_msgs.push_back(messages.size() - 1);
                    parent = &messages.back();
                    when += std::chrono::hours(1 + rnd::between(rng, 0, 30));
                }
                // Pointers into `messages` may dangle after growth; re-resolve quotes by index below.
                project_threads[project].push_back(messages[thread_msgs.front()].id);
            }

            // Notification traffic.
            const int bots = rnd::between(rng, 0, 2);
            for (int b = 0; b < bots; ++b) {
                Message msg;
                msg.list = "dev";
                msg.sent_at = random_time();
                msg.id = fmt::format("{}.{}.{}@bots.example.org", project, m, counter++);
                if (rnd::bernoulli(rng, 0.5)) {
                    msg.from_header = "buildbot@apache.org";
                    msg.subject = fmt::format("Build failed in Jenkins: {}-trunk #{}", project, 100 + counter);
                    msg.text = "See the console output for details. The build was triggered by an SCM change.";
                } else {
                    msg.from_header = "GitBox <git@apache.org>";
                    msg.subject = fmt::format("[GitBox] {} pull request #{} opened", project, counter);
                    msg.text = "The pull request was opened. Please review the change.";
                }
                messages.push_back(std::move(msg));
                ++summary.bot_emails;
            }

            // Commits.
            const int n_commits = rnd::poisson(rng, 2.0 + 5.0 * activity);
            for (int c = 0; c < n_commits; ++c) {
                const Person* author = &pick_person(m, nullptr);
                for (int tries = 0; tries < 8 && role_at(*author, m) == Role::Contributor && rnd::bernoulli(rng, 0.7); ++tries)
                    author = &pick_person(m, nullptr);
                std::vector<std::string> files;
                const int nf = rnd::between(rng, 1, 4);
                for (int f = 0; f < nf; ++f) {
                    const auto kind = rnd::index(rng, 10);
                    if (kind < 6)
                        files.push_back(fmt::format("trunk/src/main/java/org/apache/{}/Class{}.java", project,
                                                    rnd::index(rng, 14)));
                    else if (kind < 8)
                        files.push_back(fmt::format("trunk/docs/guide{}.md", rnd::index(rng, 5)));
                    else if (kind < 9)
                        files.push_back("trunk/pom.xml");
                    else
                        files.push_back(fmt::format("trunk/site/images/logo{}.png", rnd::index(rng, 3)));
                }
                const auto when = random_time();
                commits.push_back({{"id", sha256_hex(fmt::format("{}-{}-{}", options.seed, project, counter++)).substr(0, 40)},
                                   {"author", author->name},
                                   {"email", author->address},
                                   {"date", format_iso8601(when)},
                                   {"files", files},
                                   {"message", fmt::format("Update {} components", project)}});
            }
            if (m == 2) {
                commits.push_back({{"id", sha256_hex(fmt::format("{}-{}-bot-{}", options.seed, project, m)).substr(0, 40)},
                                   {"author", "jenkins"},
                                   {"email", "jenkins@apache.org"},
                                   {"date", format_iso8601(month_start + std::chrono::hours(5))},
                                   {"files", {"trunk/src/main/java/org/apache/" + project + "/Version.java"}},
                                   {"message", "[maven-release-plugin] prepare release"}});
            }
        }
        // One message well before incubation (dropped by the window filter).
        {
            Message msg;
            msg.list = "dev";
            msg.sent_at = t0 - std::chrono::days(120);
            msg.from = &people[2];
            msg.from_header = fmt::format("{} <{}>", people[2].name, people[2].address);
            msg.id = fmt::format("{}.early@dev.example.org", project);
            msg.subject = "Proposal draft";
            msg.text = "Here is an early draft of the proposal.";
            messages.push_back(std::move(msg));
        }

        // Render raw messages (quotes need the parent text).
        std::map<std::string, const Message*> by_id;
        for (const auto& msg : messages) by_id[msg.id] = &msg;
        bool dropped_id = false;
        for (auto& msg : messages) {
            std::string body = msg.text;
            std::string headers;
            headers += "From: " + msg.from_header + "\n";
            headers += "To: " + msg.list + "@" + project + ".apache.org\n";
            if (!msg.cc.empty()) headers += "Cc: " + msg.cc.front() + "\n";
            headers += "Subject: " + msg.subject + "\n";
            headers += "Date: " + format_rfc2822(msg.sent_at) + "\n";
            const bool omit_id = !dropped_id && msg.parent == std::nullopt && msg.from && msg.subject.rfind("[DISCUSS]", 0) == 0 &&
                                 msg.sent_at > t0 + std::chrono::days(200);
            if (omit_id) {
                dropped_id = true;
                msg.id = ingest::synthetic_message_id(
                    ingest::resolve_identity(msg.from_header, ingest::IdentityMap{}, project).key, msg.sent_at,
                    msg.subject);
            } else {
                headers += "Message-ID: <" + msg.id + ">\n";
            }
            if (msg.parent) {
                headers += "In-Reply-To: <" + *msg.parent + ">\n";
                headers += "References: <" + *msg.parent + ">\n";
                const Message* p = by_id.at(*msg.parent);
                std::string quoted = "\n\nOn " + format_rfc2822(p->sent_at) + ", " + p->from_header + " wrote:\n";
                std::size_t start = 0;
                while (start < p->text.size()) {
                    auto end = p->text.find('\n', start);
                    if (end == std::string::npos) end = p->text.size();
                    quoted += "> " + p->text.substr(start, end - start) + "\n";
                    start = end + 1;
                }
                body += quoted;
            }
            const auto style = rnd::index(rng, 20);
            std::string raw = headers + "MIME-Version: 1.0\n";
            if (style < 14 || !msg.from) {
                raw += "Content-Type: text/plain; charset=UTF-8\nContent-Transfer-Encoding: 7bit\n\n" + body;
            } else if (style < 17) {
                const std::string boundary = "b1_" + sha256_hex(msg.id).substr(0, 16);
                raw += "Content-Type: multipart/alternative; boundary=\"" + boundary + "\"\n\n";
                raw += "--" + boundary + "\nContent-Type: text/plain; charset=UTF-8\n"
                       "Content-Transfer-Encoding: quoted-printable\n\n" + quoted_printable(body) + "\n";
                raw += "--" + boundary + "\nContent-Type: text/html; charset=UTF-8\n\n" + html_body(msg.text) + "\n";
                raw += "--" + boundary + "--\n";
            } else if (style < 19) {
                raw += "Content-Type: text/html; charset=UTF-8\n\n" + html_body(msg.text);
            } else {
                raw += "Content-Type: text/plain; charset=UTF-8\nContent-Transfer-Encoding: base64\n\n" + base64(body);
            }
            msg.raw = std::move(raw);
        }

        // Write mbox files per list and calendar month.
        std::map<fs::path, std::vector<const Message*>> files;
        for (const auto& msg : messages) {
            const auto d = to_civil(msg.sent_at);
            files[dir / project / msg.list / fmt::format("{:04d}{:02d}.mbox", d.year, d.month)].push_back(&msg);
        }
        for (auto& [path, msgs] : files) {
            std::sort(msgs.begin(), msgs.end(),
                      [](const Message* a, const Message* b) { return std::tie(a->sent_at, a->id) < std::tie(b->sent_at, b->id); });
            fs::create_directories(path.parent_path());
            std::ofstream out(path, std::ios::binary);
            for (const auto* msg : msgs) {
                const auto sender = msg->from ? msg->from->address : ingest::parse_mailbox(msg->from_header).address;
                out << mbox_from_line(sender, msg->sent_at) << '\n';
                std::size_t start = 0;
                while (start < msg->raw.size()) {
                    auto end = msg->raw.find('\n', start);
                    if (end == std::string::npos) end = msg->raw.size();
                    auto line = msg->raw.substr(start, end - start);
                    std::size_t gt = 0;
                    while (gt < line.size() && line[gt] == '>') ++gt;
                    if (line.compare(gt, 5, "From ") == 0) out << '>';
                    out << line << '\n';
                    start = end + 1;
                }
                out << '\n';
            }
            mbox_files.emplace_back(project, path);
        }
        summary.emails += messages.size();

        std::sort(commits.begin(), commits.end(), [](const auto& a, const auto& b) {
            return std::tie(a["date"].template get_ref<const std::string&>(), a["id"].template get_ref<const std::string&>()) <
                   std::tie(b["date"].template get_ref<const std::string&>(), b["id"].template get_ref<const std::string&>());
        });
        std::ofstream cj(dir / project / "commits.jsonl", std::ios::binary);
        for (const auto& c : commits) cj << c.dump() << '\n';
        summary.commits += commits.size();
    }

    // Gold labels: parse what was written so indices match the ingest splitter.
    institutional::GoldAnnotations gold;
    rnd::Engine gold_rng(options.seed ^ 0x90adULL);
    std::map<std::string, std::vector<ingest::Email>> parsed;
    for (const auto& [project, path] : mbox_files) {
        auto emails = ingest::parse_mbox(path, project);
        for (auto& e : emails) parsed[project].push_back(std::move(e));
    }
    for (auto& [project, emails] : parsed) {
        std::sort(emails.begin(), emails.end(), [](const auto& a, const auto& b) {
            return std::tie(a.sent_at, a.message_id) < std::tie(b.sent_at, b.message_id);
        });
        ingest::link_threads(emails);
        const auto roots = ingest::thread_roots(emails);
        std::set<std::string> chosen;
        for (const auto& root : std::set<std::string>(roots.begin(), roots.end()))
            if (rnd::bernoulli(gold_rng, options.gold_thread_fraction)) chosen.insert(root);
        for (std::size_t i = 0; i < emails.size(); ++i) {
            const auto& e = emails[i];
            if (e.is_bot || !chosen.count(roots[i]) || e.sentences.empty()) continue;
            for (const auto& s : e.sentences) {
                auto it = sentence_label.find(s.text);
                gold[e.message_id][s.index] = it != sentence_label.end() && it->second;
                ++summary.gold_sentences;
            }
        }
    }
    institutional::write_gold_jsonl(dir / "gold.jsonl", gold);

    std::ofstream policies(dir / "policies.txt", std::ios::binary);
    policies << "Every release must be approved by a majority vote of the PPMC.\n"
                "Release candidates must be signed by the release manager.\n\n"
                "All contributors must submit a contributor license agreement before their first patch is merged.\n"
                "Committers shall review every change before it is merged.\n\n"
                "New committers are elected by a vote on the private list.\n"
                "The vote must remain open for at least three days.\n";

    std::ofstream config(dir / "config.toml", std::ios::binary);
    config << "# Synthetic fixture configuration.\n"
              "[paths]\n"
              "corpus_root = \".\"\n"
              "output_dir = \"out\"\n"
              "policies = \"policies.txt\"\n\n"
              "[run]\n"
           << "seed = " << options.seed << "\n\n"
           << "[topics]\n"
              "grid = [2, 3, 4, 5, 6, 7, 8]\n"
              "seeds = 2\n"
              "iterations = 400\n\n"
              "[stats]\n"
              "# Short synthetic series rarely pass ADF; difference instead of dropping them.\n"
              "nonstationary = \"difference\"\n";
    return summary;
}

}  // namespace govmine::pipeline
