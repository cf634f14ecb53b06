#include "shiftgame/group.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <climits>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

namespace shiftgame {

namespace {

std::atomic<std::uint64_t> g_ball_budget{0};
std::once_flag g_budget_once;

void init_budget() {
  std::call_once(g_budget_once, [] {
    std::uint64_t v = 1000000;
    if (const char* env = std::getenv("SHIFTGAME_BALL_BUDGET")) {
      char* end = nullptr;
      unsigned long long parsed = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && parsed > 0) v = parsed;
    }
    std::uint64_t expected = 0;
    g_ball_budget.compare_exchange_strong(expected, v);
  });
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > UINT64_MAX / b) return UINT64_MAX;
  return a * b;
}

int8_t letter_at(const Word& w, std::size_t i) {
  return static_cast<int8_t>(w[i]);
}

void push_reduced(Word& w, int8_t letter) {
  if (!w.empty() && letter_at(w, w.size() - 1) == -letter) {
    w.pop_back();
  } else {
    w.push_back(static_cast<char>(letter));
  }
}

std::vector<std::int32_t> decode_coords(const Word& w, int dim) {
  std::vector<std::int32_t> v(dim, 0);
  if (w.empty()) return v;
  if (w.size() != static_cast<std::size_t>(dim) * 4)
    fail(ErrorKind::precondition, "malformed coordinate word");
  for (int i = 0; i < dim; ++i) {
    std::uint32_t u = 0;
    std::memcpy(&u, w.data() + 4 * i, 4);
    std::int32_t s;
    std::memcpy(&s, &u, 4);
    v[i] = s;
  }
  return v;
}

Word encode_coords(const std::vector<std::int64_t>& v) {
  bool all_zero = true;
  for (std::int64_t c : v)
    if (c != 0) all_zero = false;
  if (all_zero) return Word();
  Word w(v.size() * 4, '\0');
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > INT32_MAX || v[i] < INT32_MIN)
      fail(ErrorKind::capacity, "coordinate exceeds 32-bit range");
    std::int32_t s = static_cast<std::int32_t>(v[i]);
    std::uint32_t u;
    std::memcpy(&u, &s, 4);
    std::memcpy(w.data() + 4 * i, &u, 4);
  }
  return w;
}

std::uint32_t read_u32(const Word& w, std::size_t pos) {
  std::uint32_t u = 0;
  std::memcpy(&u, w.data() + pos, 4);
  return u;
}

Word with_u32_prefix(const Word& left, const Word& right) {
  Word w(4, '\0');
  std::uint32_t n = static_cast<std::uint32_t>(left.size());
  std::memcpy(w.data(), &n, 4);
  w += left;
  w += right;
  return w;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::uint64_t ball_budget() {
  init_budget();
  return g_ball_budget.load();
}

void set_ball_budget(std::uint64_t budget) {
  init_budget();
  if (budget == 0) fail(ErrorKind::usage, "ball budget must be positive");
  g_ball_budget.store(budget);
}

struct Group::Impl {
  int rank = 0;
  int dim = 0;
  std::vector<std::vector<std::uint8_t>> table;
  std::vector<std::string> names;
  std::vector<std::uint8_t> inverse_of;
  int identity_index = 0;
  GroupPtr left, right;
  std::string description;

  mutable std::mutex cache_mutex;
  mutable std::vector<std::vector<Word>> sphere_cache;
  // UINT64_MAX marks radii not yet counted (saturated counts recompute).
  mutable std::mutex size_mutex;
  mutable std::vector<std::uint64_t> size_cache;
};

Group::~Group() = default;

GroupPtr Group::free_group(int rank) {
  if (rank < 1 || rank > 100)
    fail(ErrorKind::usage, "free group rank must be in [1,100]");
  auto g = GroupPtr(new Group());
  auto* self = const_cast<Group*>(g.get());
  self->kind_ = GroupKind::free_group;
  self->impl_ = std::make_unique<Impl>();
  self->impl_->rank = rank;
  self->impl_->description = "F" + std::to_string(rank);
  return g;
}

GroupPtr Group::free_abelian(int dim) {
  if (dim < 1 || dim > 32)
    fail(ErrorKind::usage, "free abelian dimension must be in [1,32]");
  auto g = GroupPtr(new Group());
  auto* self = const_cast<Group*>(g.get());
  self->kind_ = GroupKind::free_abelian;
  self->impl_ = std::make_unique<Impl>();
  self->impl_->dim = dim;
  self->impl_->description = dim == 1 ? "Z" : "Z^" + std::to_string(dim);
  return g;
}

GroupPtr Group::finite_table(std::vector<std::vector<int>> table,
                             std::vector<std::string> names) {
  std::size_t n = table.size();
  if (n == 0 || n > 255)
    fail(ErrorKind::precondition, "table order must be in [1,255]");
  std::vector<std::vector<std::uint8_t>> t(n, std::vector<std::uint8_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n)
      fail(ErrorKind::precondition, "multiplication table is not square");
    for (std::size_t j = 0; j < n; ++j) {
      if (table[i][j] < 0 || static_cast<std::size_t>(table[i][j]) >= n)
        fail(ErrorKind::precondition, "table entry out of range");
      t[i][j] = static_cast<std::uint8_t>(table[i][j]);
    }
  }
  // Latin square: every row and column is a permutation.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> row(n, false), col(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      if (row[t[i][j]] || col[t[j][i]])
        fail(ErrorKind::precondition, "table is not a Latin square");
      row[t[i][j]] = col[t[j][i]] = true;
    }
  }
  int e = -1;
  for (std::size_t i = 0; i < n && e < 0; ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < n; ++j)
      if (t[i][j] != j || t[j][i] != j) ok = false;
    if (ok) e = static_cast<int>(i);
  }
  if (e < 0) fail(ErrorKind::precondition, "table has no identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]])
          fail(ErrorKind::precondition, "table is not associative");
  std::vector<std::uint8_t> inv(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (t[a][b] == static_cast<std::uint8_t>(e))
        inv[a] = static_cast<std::uint8_t>(b);
  if (names.empty()) {
    for (std::size_t i = 0; i < n; ++i) names.push_back("t" + std::to_string(i));
  }
  if (names.size() != n)
    fail(ErrorKind::precondition, "name count does not match table order");
  std::set<std::string> distinct;
  for (const auto& name : names) {
    if (name.empty() || name.find_first_of(",() \t") != std::string::npos)
      fail(ErrorKind::precondition, "invalid element name: " + name);
    if (!distinct.insert(name).second)
      fail(ErrorKind::precondition, "duplicate element name: " + name);
  }
  auto g = GroupPtr(new Group());
  auto* self = const_cast<Group*>(g.get());
  self->kind_ = GroupKind::finite_table;
  self->impl_ = std::make_unique<Impl>();
  self->impl_->table = std::move(t);
  self->impl_->names = std::move(names);
  self->impl_->inverse_of = std::move(inv);
  self->impl_->identity_index = e;
  self->impl_->description = "T" + std::to_string(n);
  return g;
}

GroupPtr Group::cyclic(int order) {
  if (order < 1 || order > 255)
    fail(ErrorKind::usage, "cyclic order must be in [1,255]");
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  std::vector<std::string> names;
  for (int i = 0; i < order; ++i) {
    names.push_back("g" + std::to_string(i));
    for (int j = 0; j < order; ++j) table[i][j] = (i + j) % order;
  }
  auto g = finite_table(std::move(table), std::move(names));
  const_cast<Group*>(g.get())->impl_->description = "C" + std::to_string(order);
  return g;
}

GroupPtr Group::product(GroupPtr left, GroupPtr right) {
  if (!left || !right) fail(ErrorKind::usage, "product of null groups");
  auto g = GroupPtr(new Group());
  auto* self = const_cast<Group*>(g.get());
  self->kind_ = GroupKind::product;
  self->impl_ = std::make_unique<Impl>();
  self->impl_->left = left;
  self->impl_->right = right;
  self->impl_->description = left->describe() + " x " + right->describe();
  return g;
}

bool Group::same(const Group& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case GroupKind::free_group:
      return impl_->rank == other.impl_->rank;
    case GroupKind::free_abelian:
      return impl_->dim == other.impl_->dim;
    case GroupKind::finite_table:
      return impl_->table == other.impl_->table;
    case GroupKind::product:
      return impl_->left->same(*other.impl_->left) &&
             impl_->right->same(*other.impl_->right);
  }
  return false;
}

bool Group::is_finite() const {
  switch (kind_) {
    case GroupKind::free_group:
    case GroupKind::free_abelian:
      return false;
    case GroupKind::finite_table:
      return true;
    case GroupKind::product:
      return impl_->left->is_finite() && impl_->right->is_finite();
  }
  return false;
}

std::optional<std::uint64_t> Group::finite_order() const {
  if (!is_finite()) return std::nullopt;
  if (kind_ == GroupKind::finite_table) return impl_->table.size();
  return sat_mul(*impl_->left->finite_order(), *impl_->right->finite_order());
}

int Group::free_rank() const {
  if (kind_ != GroupKind::free_group)
    fail(ErrorKind::usage, "free_rank on non-free group");
  return impl_->rank;
}

int Group::abelian_dim() const {
  if (kind_ != GroupKind::free_abelian)
    fail(ErrorKind::usage, "abelian_dim on non-abelian group");
  return impl_->dim;
}

int Group::table_order() const {
  if (kind_ != GroupKind::finite_table)
    fail(ErrorKind::usage, "table_order on non-table group");
  return static_cast<int>(impl_->table.size());
}

std::vector<std::vector<int>> Group::table_copy() const {
  if (kind_ != GroupKind::finite_table)
    fail(ErrorKind::usage, "table_copy on non-table group");
  std::vector<std::vector<int>> out;
  for (const auto& row : impl_->table)
    out.emplace_back(row.begin(), row.end());
  return out;
}

std::vector<std::string> Group::table_names() const {
  if (kind_ != GroupKind::finite_table)
    fail(ErrorKind::usage, "table_names on non-table group");
  return impl_->names;
}

GroupPtr Group::left() const {
  if (kind_ != GroupKind::product) fail(ErrorKind::usage, "left on non-product");
  return impl_->left;
}

GroupPtr Group::right() const {
  if (kind_ != GroupKind::product) fail(ErrorKind::usage, "right on non-product");
  return impl_->right;
}

Word Group::pair_word(const Word& left, const Word& right) const {
  if (kind_ != GroupKind::product)
    fail(ErrorKind::usage, "pair_word on non-product");
  if (left.empty() && right.empty()) return Word();
  return with_u32_prefix(left, right);
}

std::pair<Word, Word> Group::split_word(const Word& w) const {
  if (kind_ != GroupKind::product)
    fail(ErrorKind::usage, "split_word on non-product");
  if (w.empty()) return {Word(), Word()};
  if (w.size() < 4) fail(ErrorKind::precondition, "malformed product word");
  std::uint32_t n = read_u32(w, 0);
  if (4 + static_cast<std::size_t>(n) > w.size())
    fail(ErrorKind::precondition, "malformed product word");
  return {w.substr(4, n), w.substr(4 + n)};
}

Word Group::multiply_words(const Word& a, const Word& b) const {
  if (a.empty()) return b;
  if (b.empty()) return a;
  switch (kind_) {
    case GroupKind::free_group: {
      Word out = a;
      for (char c : b) push_reduced(out, static_cast<int8_t>(c));
      return out;
    }
    case GroupKind::free_abelian: {
      auto va = decode_coords(a, impl_->dim);
      auto vb = decode_coords(b, impl_->dim);
      std::vector<std::int64_t> sum(impl_->dim);
      for (int i = 0; i < impl_->dim; ++i)
        sum[i] = static_cast<std::int64_t>(va[i]) + vb[i];
      return encode_coords(sum);
    }
    case GroupKind::finite_table: {
      std::uint8_t ia = static_cast<std::uint8_t>(a[0]);
      std::uint8_t ib = static_cast<std::uint8_t>(b[0]);
      std::uint8_t r = impl_->table[ia][ib];
      if (r == impl_->identity_index) return Word();
      return Word(1, static_cast<char>(r));
    }
    case GroupKind::product: {
      auto [al, ar] = split_word(a);
      auto [bl, br] = split_word(b);
      return pair_word(impl_->left->multiply_words(al, bl),
                       impl_->right->multiply_words(ar, br));
    }
  }
  fail(ErrorKind::precondition, "unknown group kind");
}

Word Group::inverse_word(const Word& a) const {
  if (a.empty()) return a;
  switch (kind_) {
    case GroupKind::free_group: {
      Word out;
      out.reserve(a.size());
      for (auto it = a.rbegin(); it != a.rend(); ++it)
        out.push_back(static_cast<char>(-static_cast<int8_t>(*it)));
      return out;
    }
    case GroupKind::free_abelian: {
      auto v = decode_coords(a, impl_->dim);
      std::vector<std::int64_t> neg(impl_->dim);
      for (int i = 0; i < impl_->dim; ++i) neg[i] = -static_cast<std::int64_t>(v[i]);
      return encode_coords(neg);
    }
    case GroupKind::finite_table: {
      std::uint8_t ia = static_cast<std::uint8_t>(a[0]);
      std::uint8_t r = impl_->inverse_of[ia];
      if (r == impl_->identity_index) return Word();
      return Word(1, static_cast<char>(r));
    }
    case GroupKind::product: {
      auto [al, ar] = split_word(a);
      return pair_word(impl_->left->inverse_word(al),
                       impl_->right->inverse_word(ar));
    }
  }
  fail(ErrorKind::precondition, "unknown group kind");
}

int Group::word_length_of(const Word& a) const {
  switch (kind_) {
    case GroupKind::free_group:
      return static_cast<int>(a.size());
    case GroupKind::free_abelian: {
      if (a.empty()) return 0;
      auto v = decode_coords(a, impl_->dim);
      std::int64_t sum = 0;
      for (std::int32_t c : v) sum += c < 0 ? -static_cast<std::int64_t>(c) : c;
      if (sum > INT_MAX) fail(ErrorKind::capacity, "word length exceeds int range");
      return static_cast<int>(sum);
    }
    case GroupKind::finite_table:
      return a.empty() ? 0 : 1;
    case GroupKind::product: {
      auto [al, ar] = split_word(a);
      return impl_->left->word_length_of(al) + impl_->right->word_length_of(ar);
    }
  }
  fail(ErrorKind::precondition, "unknown group kind");
}

std::vector<Word> Group::generator_words() const {
  std::vector<Word> out;
  switch (kind_) {
    case GroupKind::free_group:
      for (int i = 1; i <= impl_->rank; ++i) {
        out.push_back(Word(1, static_cast<char>(i)));
        out.push_back(Word(1, static_cast<char>(-i)));
      }
      break;
    case GroupKind::free_abelian:
      for (int i = 0; i < impl_->dim; ++i) {
        std::vector<std::int64_t> v(impl_->dim, 0);
        v[i] = 1;
        out.push_back(encode_coords(v));
        v[i] = -1;
        out.push_back(encode_coords(v));
      }
      break;
    case GroupKind::finite_table:
      for (std::size_t i = 0; i < impl_->table.size(); ++i)
        if (static_cast<int>(i) != impl_->identity_index)
          out.push_back(Word(1, static_cast<char>(i)));
      break;
    case GroupKind::product: {
      for (const Word& w : impl_->left->generator_words())
        out.push_back(pair_word(w, Word()));
      for (const Word& w : impl_->right->generator_words())
        out.push_back(pair_word(Word(), w));
      break;
    }
  }
  return out;
}

GroupElement Group::identity() const {
  return {shared_from_this(), Word()};
}

GroupElement Group::element(Word w) const {
  // Validate canonical shape so malformed bytes are caught at the boundary.
  switch (kind_) {
    case GroupKind::free_group:
      for (std::size_t i = 0; i < w.size(); ++i) {
        int8_t l = letter_at(w, i);
        if (l == 0 || l > impl_->rank || l < -impl_->rank)
          fail(ErrorKind::precondition, "free word letter out of range");
        if (i + 1 < w.size() && letter_at(w, i + 1) == -l)
          fail(ErrorKind::precondition, "free word is not reduced");
      }
      break;
    case GroupKind::free_abelian: {
      auto v = decode_coords(w, impl_->dim);
      if (!w.empty()) {
        bool all_zero = true;
        for (std::int32_t c : v)
          if (c != 0) all_zero = false;
        if (all_zero)
          fail(ErrorKind::precondition, "zero vector must be the empty word");
      }
      break;
    }
    case GroupKind::finite_table:
      if (w.size() > 1) fail(ErrorKind::precondition, "malformed table word");
      if (w.size() == 1) {
        std::uint8_t i = static_cast<std::uint8_t>(w[0]);
        if (i >= impl_->table.size())
          fail(ErrorKind::precondition, "table index out of range");
        if (static_cast<int>(i) == impl_->identity_index)
          fail(ErrorKind::precondition, "identity must be the empty word");
      }
      break;
    case GroupKind::product: {
      if (!w.empty()) {
        auto [l, r] = split_word(w);
        if (l.empty() && r.empty())
          fail(ErrorKind::precondition, "identity must be the empty word");
        impl_->left->element(l);
        impl_->right->element(r);
      }
      break;
    }
  }
  return {shared_from_this(), std::move(w)};
}

GroupElement Group::multiply(const GroupElement& a, const GroupElement& b) const {
  if (!a.group || !b.group || !a.group->same(*this) || !b.group->same(*this))
    fail(ErrorKind::usage, "mixed-group operands");
  return {shared_from_this(), multiply_words(a.word, b.word)};
}

GroupElement Group::inverse(const GroupElement& a) const {
  if (!a.group || !a.group->same(*this))
    fail(ErrorKind::usage, "mixed-group operand");
  return {shared_from_this(), inverse_word(a.word)};
}

int Group::word_length(const GroupElement& a) const {
  if (!a.group || !a.group->same(*this))
    fail(ErrorKind::usage, "mixed-group operand");
  return word_length_of(a.word);
}

std::uint64_t Group::sphere_size(int r) const {
  if (r < 0) return 0;
  if (kind_ == GroupKind::finite_table) {
    if (r == 0) return 1;
    if (r == 1) return impl_->table.size() - 1;
    return 0;
  }
  if (kind_ == GroupKind::free_abelian && impl_->dim == 1) return r == 0 ? 1 : 2;
  {
    std::lock_guard<std::mutex> lock(impl_->size_mutex);
    if (static_cast<int>(impl_->size_cache.size()) > r &&
        impl_->size_cache[r] != UINT64_MAX)
      return impl_->size_cache[r];
  }
  std::uint64_t size = 0;
  switch (kind_) {
    case GroupKind::free_group: {
      if (r == 0) {
        size = 1;
        break;
      }
      std::uint64_t k = static_cast<std::uint64_t>(impl_->rank);
      size = 2 * k;
      for (int i = 1; i < r; ++i) size = sat_mul(size, 2 * k - 1);
      break;
    }
    case GroupKind::free_abelian: {
      // Count of integer vectors with L1 norm exactly r, by dimension.
      std::vector<std::uint64_t> cur(r + 1, 0);
      for (int w = 0; w <= r; ++w) cur[w] = w == 0 ? 1 : 2;
      for (int d = 2; d <= impl_->dim; ++d) {
        std::vector<std::uint64_t> next(r + 1, 0);
        for (int w = 0; w <= r; ++w) {
          std::uint64_t total = cur[w];  // last coordinate zero
          for (int t = 1; t <= w; ++t)
            total = sat_add(total, sat_mul(2, cur[w - t]));
          next[w] = total;
        }
        cur = std::move(next);
      }
      size = cur[r];
      break;
    }
    case GroupKind::product: {
      for (int p = 0; p <= r; ++p)
        size = sat_add(size, sat_mul(impl_->left->sphere_size(p),
                                     impl_->right->sphere_size(r - p)));
      break;
    }
    default:
      break;
  }
  std::lock_guard<std::mutex> lock(impl_->size_mutex);
  if (static_cast<int>(impl_->size_cache.size()) <= r)
    impl_->size_cache.resize(r + 1, UINT64_MAX);
  impl_->size_cache[r] = size;
  return size;
}

std::uint64_t Group::ball_size(int r) const {
  std::uint64_t total = 0;
  for (int i = 0; i <= r; ++i) total = sat_add(total, sphere_size(i));
  return total;
}

namespace {

void gen_free_sphere(int rank, int r, Word& cur, std::vector<Word>& out) {
  if (static_cast<int>(cur.size()) == r) {
    out.push_back(cur);
    return;
  }
  for (int i = 1; i <= rank; ++i) {
    for (int sign = 0; sign < 2; ++sign) {
      int8_t l = static_cast<int8_t>(sign == 0 ? i : -i);
      if (!cur.empty() && letter_at(cur, cur.size() - 1) == -l) continue;
      cur.push_back(static_cast<char>(l));
      gen_free_sphere(rank, r, cur, out);
      cur.pop_back();
    }
  }
}

void gen_abelian_sphere(int dim, int pos, int remaining,
                        std::vector<std::int64_t>& cur, std::vector<Word>& out) {
  if (pos == dim - 1) {
    if (remaining == 0) {
      cur[pos] = 0;
      out.push_back(encode_coords(cur));
    } else {
      cur[pos] = remaining;
      out.push_back(encode_coords(cur));
      cur[pos] = -remaining;
      out.push_back(encode_coords(cur));
    }
    cur[pos] = 0;
    return;
  }
  for (int t = -remaining; t <= remaining; ++t) {
    cur[pos] = t;
    gen_abelian_sphere(dim, pos + 1, remaining - (t < 0 ? -t : t), cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

const std::vector<Word>& Group::sphere(int r) const {
  if (r < 0) fail(ErrorKind::usage, "negative sphere radius");
  {
    std::lock_guard<std::mutex> lock(impl_->cache_mutex);
    if (static_cast<int>(impl_->sphere_cache.size()) > r)
      return impl_->sphere_cache[r];
  }
  std::uint64_t need = ball_size(r);
  if (need > ball_budget())
    fail(ErrorKind::budget,
         "ball of radius " + std::to_string(r) + " needs " +
             std::to_string(need) + " elements, budget " +
             std::to_string(ball_budget()));
  std::lock_guard<std::mutex> lock(impl_->cache_mutex);
  while (static_cast<int>(impl_->sphere_cache.size()) <= r) {
    int radius = static_cast<int>(impl_->sphere_cache.size());
    std::vector<Word> out;
    switch (kind_) {
      case GroupKind::free_group: {
        Word cur;
        gen_free_sphere(impl_->rank, radius, cur, out);
        break;
      }
      case GroupKind::free_abelian: {
        std::vector<std::int64_t> cur(impl_->dim, 0);
        gen_abelian_sphere(impl_->dim, 0, radius, cur, out);
        break;
      }
      case GroupKind::finite_table: {
        if (radius == 0) {
          out.push_back(Word());
        } else if (radius == 1) {
          for (std::size_t i = 0; i < impl_->table.size(); ++i)
            if (static_cast<int>(i) != impl_->identity_index)
              out.push_back(Word(1, static_cast<char>(i)));
        }
        break;
      }
      case GroupKind::product: {
        for (int p = 0; p <= radius; ++p) {
          if (impl_->left->sphere_size(p) == 0 ||
              impl_->right->sphere_size(radius - p) == 0)
            continue;
          const auto& ls = impl_->left->sphere(p);
          const auto& rs = impl_->right->sphere(radius - p);
          for (const Word& a : ls)
            for (const Word& b : rs) out.push_back(pair_word(a, b));
        }
        break;
      }
    }
    std::sort(out.begin(), out.end());
    impl_->sphere_cache.push_back(std::move(out));
  }
  return impl_->sphere_cache[r];
}

std::vector<Word> Group::ball(int r) const {
  std::vector<Word> out;
  for (int i = 0; i <= r; ++i) {
    const auto& s = sphere(i);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::vector<int> Group::translate_lengths(const Word& g, int L) const {
  if (L < 0) fail(ErrorKind::usage, "negative sphere radius");
  int r = word_length_of(g);
  std::set<int> lengths;
  switch (kind_) {
    case GroupKind::free_group:
    case GroupKind::free_abelian: {
      bool line = (kind_ == GroupKind::free_group && impl_->rank == 1) ||
                  (kind_ == GroupKind::free_abelian && impl_->dim == 1);
      if (line) {
        lengths.insert(L + r);
        lengths.insert(L > r ? L - r : r - L);
      } else {
        int tmax = L < r ? L : r;
        for (int t = 0; t <= tmax; ++t) lengths.insert(L + r - 2 * t);
      }
      break;
    }
    case GroupKind::finite_table: {
      if (sphere_size(L) == 0) break;
      for (const Word& c : sphere(L))
        lengths.insert(word_length_of(multiply_words(g, c)));
      break;
    }
    case GroupKind::product: {
      auto [gl, gr] = split_word(g);
      for (int p = 0; p <= L; ++p) {
        if (impl_->left->sphere_size(p) == 0 ||
            impl_->right->sphere_size(L - p) == 0)
          continue;
        auto tl = impl_->left->translate_lengths(gl, p);
        auto tr = impl_->right->translate_lengths(gr, L - p);
        for (int a : tl)
          for (int b : tr) lengths.insert(a + b);
      }
      break;
    }
  }
  return std::vector<int>(lengths.begin(), lengths.end());
}

std::string Group::format_word(const Word& w) const {
  switch (kind_) {
    case GroupKind::free_group: {
      if (w.empty()) return "e";
      std::string out;
      for (char c : w) {
        int8_t l = static_cast<int8_t>(c);
        int i = l > 0 ? l : -l;
        if (impl_->rank <= 26) {
          out += static_cast<char>((l > 0 ? 'a' : 'A') + (i - 1));
        } else {
          if (!out.empty()) out += '.';
          out += (l > 0 ? "g" : "G") + std::to_string(i);
        }
      }
      return out;
    }
    case GroupKind::free_abelian: {
      auto v = decode_coords(w, impl_->dim);
      if (impl_->dim == 1) return std::to_string(v[0]);
      std::string out = "(";
      for (int i = 0; i < impl_->dim; ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
      }
      return out + ")";
    }
    case GroupKind::finite_table: {
      int i = w.empty() ? impl_->identity_index
                        : static_cast<std::uint8_t>(w[0]);
      return impl_->names[i];
    }
    case GroupKind::product: {
      auto [l, r] = split_word(w);
      return "(" + impl_->left->format_word(l) + "," +
             impl_->right->format_word(r) + ")";
    }
  }
  fail(ErrorKind::precondition, "unknown group kind");
}

namespace {

// Splits "a,b" at the top-level comma, respecting nested parentheses.
std::pair<std::string, std::string> split_pair(const std::string& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) return {s.substr(0, i), s.substr(i + 1)};
  }
  fail(ErrorKind::usage, "expected a pair: " + s);
}

}  // namespace

Word Group::parse_element(const std::string& raw) const {
  std::string text = trim(raw);
  switch (kind_) {
    case GroupKind::free_group: {
      if (text.empty() || text == "e") return Word();
      Word out;
      if (impl_->rank <= 26 && text.find('g') == std::string::npos &&
          text.find('G') == std::string::npos) {
        for (char c : text) {
          int8_t l;
          if (c >= 'a' && c < 'a' + impl_->rank) {
            l = static_cast<int8_t>(c - 'a' + 1);
          } else if (c >= 'A' && c < 'A' + impl_->rank) {
            l = static_cast<int8_t>(-(c - 'A' + 1));
          } else {
            fail(ErrorKind::usage, "bad generator letter: " + std::string(1, c));
          }
          push_reduced(out, l);
        }
      } else {
        for (const std::string& tokRaw : split(text, '.')) {
          std::string tok = trim(tokRaw);
          if (tok.size() < 2 || (tok[0] != 'g' && tok[0] != 'G'))
            fail(ErrorKind::usage, "bad generator token: " + tok);
          int i = std::stoi(tok.substr(1));
          if (i < 1 || i > impl_->rank)
            fail(ErrorKind::usage, "generator index out of range: " + tok);
          push_reduced(out, static_cast<int8_t>(tok[0] == 'g' ? i : -i));
        }
      }
      return out;
    }
    case GroupKind::free_abelian: {
      std::vector<std::string> parts;
      if (impl_->dim == 1 && (text.empty() || text[0] != '(')) {
        parts.push_back(text);
      } else {
        if (text.size() < 2 || text.front() != '(' || text.back() != ')')
          fail(ErrorKind::usage, "expected coordinate tuple: " + text);
        parts = split(text.substr(1, text.size() - 2), ',');
      }
      if (static_cast<int>(parts.size()) != impl_->dim)
        fail(ErrorKind::usage, "expected " + std::to_string(impl_->dim) +
                                   " coordinates: " + text);
      std::vector<std::int64_t> v(impl_->dim);
      for (int i = 0; i < impl_->dim; ++i) {
        try {
          v[i] = std::stoll(trim(parts[i]));
        } catch (const std::exception&) {
          fail(ErrorKind::usage, "bad coordinate: " + parts[i]);
        }
      }
      return encode_coords(v);
    }
    case GroupKind::finite_table: {
      for (std::size_t i = 0; i < impl_->names.size(); ++i) {
        if (impl_->names[i] == text) {
          if (static_cast<int>(i) == impl_->identity_index) return Word();
          return Word(1, static_cast<char>(i));
        }
      }
      fail(ErrorKind::usage, "unknown element name: " + text);
    }
    case GroupKind::product: {
      if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        fail(ErrorKind::usage, "expected element pair: " + text);
      auto [l, r] = split_pair(text.substr(1, text.size() - 2));
      return pair_word(impl_->left->parse_element(l),
                       impl_->right->parse_element(r));
    }
  }
  fail(ErrorKind::precondition, "unknown group kind");
}

std::string Group::describe() const { return impl_->description; }

namespace {

GroupPtr parse_atom(const std::string& tok) {
  if (tok == "Z") return Group::free_abelian(1);
  if (tok.rfind("Z^", 0) == 0) return Group::free_abelian(std::stoi(tok.substr(2)));
  if (tok.size() > 1 && tok[0] == 'F') return Group::free_group(std::stoi(tok.substr(1)));
  if (tok.size() > 1 && tok[0] == 'C') return Group::cyclic(std::stoi(tok.substr(1)));
  if (tok.rfind("table:", 0) == 0) {
    std::string path = tok.substr(6);
    std::ifstream in(path);
    if (!in) fail(ErrorKind::usage, "cannot read table file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::vector<std::vector<int>> table;
    std::string line;
    std::stringstream ss(buf.str());
    while (std::getline(ss, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      std::vector<int> row;
      for (const std::string& cell : split(line, ','))
        row.push_back(std::stoi(trim(cell)));
      table.push_back(std::move(row));
    }
    return Group::finite_table(std::move(table));
  }
  fail(ErrorKind::usage, "unknown group expression: " + tok);
}

GroupPtr parse_expr(const std::string& s, std::size_t& pos);

GroupPtr parse_operand(const std::string& s, std::size_t& pos,
                       std::vector<GroupPtr>& atoms) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos < s.size() && s[pos] == '(') {
    ++pos;
    GroupPtr g = parse_expr(s, pos);
    if (pos >= s.size() || s[pos] != ')')
      fail(ErrorKind::usage, "unbalanced parentheses in group expression");
    ++pos;
    atoms.push_back(g);
    return g;
  }
  std::size_t start = pos;
  while (pos < s.size() && s[pos] != '(' && s[pos] != ')' &&
         !std::isspace(static_cast<unsigned char>(s[pos])))
    ++pos;
  std::string tok = s.substr(start, pos - start);
  if (tok.empty()) fail(ErrorKind::usage, "empty group expression");
  // "ZxC2" and "Z x C2" both work: split raw tokens on 'x' unless the token
  // is a table path.
  if (tok.rfind("table:", 0) == 0) {
    atoms.push_back(parse_atom(tok));
  } else {
    for (const std::string& piece : split(tok, 'x'))
      if (!piece.empty()) atoms.push_back(parse_atom(piece));
  }
  return atoms.empty() ? nullptr : atoms.back();
}

GroupPtr parse_expr(const std::string& s, std::size_t& pos) {
  std::vector<GroupPtr> atoms;
  while (true) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size() || s[pos] == ')') break;
    parse_operand(s, pos, atoms);
  }
  if (atoms.empty()) fail(ErrorKind::usage, "empty group expression");
  GroupPtr g = atoms[0];
  for (std::size_t i = 1; i < atoms.size(); ++i) g = Group::product(g, atoms[i]);
  return g;
}

}  // namespace

GroupPtr Group::from_expression(const std::string& expr) {
  std::size_t pos = 0;
  GroupPtr g = parse_expr(expr, pos);
  while (pos < expr.size() && std::isspace(static_cast<unsigned char>(expr[pos])))
    ++pos;
  if (pos != expr.size())
    fail(ErrorKind::usage, "trailing characters in group expression: " + expr);
  return g;
}

GroupPtr Group::from_config_text(const std::string& text) {
  std::string kind, left, right, names;
  int rank = 0, dim = 0;
  std::vector<std::vector<int>> table;
  bool in_table = false;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (in_table) {
      std::vector<int> row;
      for (const std::string& cell : split(line, ','))
        row.push_back(std::stoi(trim(cell)));
      table.push_back(std::move(row));
      continue;
    }
    std::size_t sp = line.find_first_of(" \t");
    std::string key = sp == std::string::npos ? line : line.substr(0, sp);
    std::string value = sp == std::string::npos ? "" : trim(line.substr(sp));
    if (key == "group") return from_expression(value);
    if (key == "kind") kind = value;
    else if (key == "rank") rank = std::stoi(value);
    else if (key == "dim") dim = std::stoi(value);
    else if (key == "names") names = value;
    else if (key == "left") left = value;
    else if (key == "right") right = value;
    else if (key == "table") in_table = true;
    else fail(ErrorKind::usage, "unknown config key: " + key);
  }
  if (kind == "free") return free_group(rank);
  if (kind == "free-abelian") return free_abelian(dim);
  if (kind == "finite-table") {
    std::vector<std::string> nameList;
    if (!names.empty())
      for (const std::string& n : split(names, ',')) nameList.push_back(trim(n));
    return finite_table(std::move(table), std::move(nameList));
  }
  if (kind == "product") {
    if (left.empty() || right.empty())
      fail(ErrorKind::usage, "product config needs left and right");
    return product(from_expression(left), from_expression(right));
  }
  fail(ErrorKind::usage, "config must set kind or group");
}

}  // namespace shiftgame
