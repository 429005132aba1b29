#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "henon/periodic_search.hpp"

namespace henon {

namespace {

std::string join(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out.empty() ? "none" : out;
}

std::string cycle_text(const RationalCycle& c) {
  std::string out;
  for (const auto& p : c.points) out += "(" + to_string(p.x) + "," + to_string(p.y) + ")";
  return out;
}

class Fnv1a {
 public:
  void add(const std::string& s) {
    for (unsigned char ch : s) {
      hash_ ^= ch;
      hash_ *= 0x100000001b3ULL;
    }
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

// Append-only checkpoint writer: each chunk is written then fsync'd.
class CheckpointWriter {
 public:
  explicit CheckpointWriter(const std::string& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd_ < 0) throw CheckpointError("cannot open checkpoint " + path + ": " + std::strerror(errno));
  }
  ~CheckpointWriter() {
    if (fd_ >= 0) ::close(fd_);
  }
  CheckpointWriter(const CheckpointWriter&) = delete;
  CheckpointWriter& operator=(const CheckpointWriter&) = delete;

  void write(const std::string& data) {
    const char* p = data.data();
    std::size_t left = data.size();
    while (left > 0) {
      const ssize_t n = ::write(fd_, p, left);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw CheckpointError("write to " + path_ + " failed: " + std::strerror(errno));
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }
  }
  void sync() {
    if (::fsync(fd_) != 0) throw CheckpointError("fsync of " + path_ + " failed: " + std::strerror(errno));
  }

 private:
  std::string path_;
  int fd_ = -1;
};

// Loads the valid records of an existing checkpoint. A torn or malformed
// tail is cut off by rewriting the valid prefix through a temporary file.
std::map<std::string, BatchRecord> load_checkpoint(const std::string& path) {
  std::map<std::string, BatchRecord> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  std::size_t valid_end = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const std::size_t nl = content.find('\n', pos);
    if (nl == std::string::npos) break;
    auto rec = parse_record(content.substr(pos, nl - pos));
    if (!rec) break;
    out.emplace(to_fraction_string(rec->b), std::move(*rec));
    pos = nl + 1;
    valid_end = pos;
  }
  if (valid_end != content.size()) {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      os.write(content.data(), static_cast<std::streamsize>(valid_end));
      os.flush();
      if (!os) throw CheckpointError("cannot rewrite checkpoint " + path);
    }
    const int fd = ::open(tmp.c_str(), O_RDONLY);
    if (fd >= 0) {
      ::fsync(fd);
      ::close(fd);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
      throw CheckpointError("cannot replace checkpoint " + path + ": " + std::strerror(errno));
    }
  }
  return out;
}

}  // namespace

std::string BatchRecord::line() const { return to_fraction_string(b) + "\t" + to_string(outcome) + "\t" + detail; }

BatchRecord make_record(const BigRational& b, const Verdict& v) {
  std::string detail;
  switch (v.outcome) {
    case Outcome::VerifiedByFilter: {
      const auto& s = v.filter.allowed();
      detail = "S=" + join(std::vector<std::size_t>(s.begin(), s.end()));
      break;
    }
    case Outcome::VerifiedBySearch:
      detail = "periods=" + join(v.periods());
      break;
    case Outcome::VacuousNonSquareDenominator:
      detail = "-";
      break;
    case Outcome::Refuted:
      detail = "period=" + std::to_string(v.witness->period()) + ";cycle=" + cycle_text(*v.witness);
      break;
  }
  return {b, v.outcome, detail};
}

std::optional<BatchRecord> parse_record(const std::string& line) {
  const std::size_t t1 = line.find('\t');
  if (t1 == std::string::npos) return std::nullopt;
  const std::size_t t2 = line.find('\t', t1 + 1);
  if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) return std::nullopt;
  const std::string frac = line.substr(0, t1);
  if (frac.find('/') == std::string::npos) return std::nullopt;
  BatchRecord rec;
  try {
    rec.b = parse_rational(frac);
  } catch (const ParseError&) {
    return std::nullopt;
  }
  const auto outcome = parse_outcome(line.substr(t1 + 1, t2 - t1 - 1));
  if (!outcome) return std::nullopt;
  rec.outcome = *outcome;
  rec.detail = line.substr(t2 + 1);
  if (rec.detail.empty()) return std::nullopt;
  return rec;
}

unsigned default_workers() {
  if (const char* env = std::getenv("HENON_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

BatchReport batch_verify(const BatchOptions& options) {
  if (options.max_height == 0) throw std::domain_error("batch_verify expects T >= 1");
  const unsigned workers = options.workers == 0 ? default_workers() : options.workers;
  const std::size_t chunk = options.chunk == 0 ? 1 : options.chunk;

  std::map<std::string, BatchRecord> previous;
  std::optional<CheckpointWriter> writer;
  if (options.checkpoint) {
    if (options.resume) {
      previous = load_checkpoint(*options.checkpoint);
    } else {
      std::ofstream truncate(*options.checkpoint, std::ios::trunc);
      if (!truncate) throw CheckpointError("cannot create checkpoint " + *options.checkpoint);
    }
    writer.emplace(*options.checkpoint);
  }

  BatchReport report{options.max_height, 0, 0, 0, 0, 0, 0, 0, {}, {}};
  Fnv1a digest;
  std::size_t written = 0;

  auto account = [&](const BatchRecord& rec) {
    ++report.parameters;
    if (integer_sqrt_exact(rec.b.get_den())) ++report.square_denominators;
    switch (rec.outcome) {
      case Outcome::VerifiedByFilter:
        ++report.verified_by_filter;
        break;
      case Outcome::VerifiedBySearch:
        ++report.verified_by_search;
        break;
      case Outcome::VacuousNonSquareDenominator:
        ++report.vacuous;
        break;
      case Outcome::Refuted:
        ++report.refuted;
        report.refuted_records.push_back(rec);
        break;
    }
    digest.add(rec.line());
    digest.add("\n");
  };

  RationalEnumerator params(options.max_height, false);
  std::vector<BigRational> pending;
  bool exhausted = false;
  while (!exhausted) {
    pending.clear();
    while (pending.size() < chunk) {
      auto b = params.next();
      if (!b) {
        exhausted = true;
        break;
      }
      pending.push_back(*b);
    }
    if (pending.empty()) break;

    std::vector<std::optional<BatchRecord>> results(pending.size());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      auto it = previous.find(to_fraction_string(pending[i]));
      if (it != previous.end()) {
        results[i] = it->second;
        ++report.resumed;
      } else {
        todo.push_back(i);
      }
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= todo.size()) return;
        const std::size_t i = todo[k];
        try {
          results[i] = make_record(pending[i], verify_conjecture_for(pending[i], options.primes));
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const unsigned n_threads = std::min<std::size_t>(workers, std::max<std::size_t>(todo.size(), 1));
    if (n_threads <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::string out;
    for (std::size_t k = 0; k < todo.size(); ++k) {
      const std::string line = results[todo[k]]->line() + "\n";
      if (options.crash_after && written == *options.crash_after) {
        // Simulated kill between two checkpoint writes.
        if (writer && !out.empty()) {
          writer->write(out);
          writer->sync();
        }
        std::_Exit(70);
      }
      out += line;
      ++written;
    }
    if (writer && !out.empty()) {
      writer->write(out);
      writer->sync();
    }
    for (const auto& r : results) account(*r);
  }
  report.digest = digest.hex();
  return report;
}

}  // namespace henon
