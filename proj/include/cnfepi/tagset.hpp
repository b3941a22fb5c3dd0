#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cnfepi {

// Penn Treebank tags plus the four Twitter tags (RT, USR, HT, URL).
class TagSet {
 public:
  TagSet() = default;
  TagSet(std::vector<std::string> ptb_tags, std::vector<std::string> special_tags);

  // The 45-tag Penn Treebank inventory followed by RT, USR, HT, URL.
  static const TagSet& canonical();
  static TagSet empty() { return TagSet({}, {}); }

  const std::vector<std::string>& ptb_tags() const { return ptb_; }
  const std::vector<std::string>& special_tags() const { return special_; }

  // PTB tags then special tags.
  const std::vector<std::string>& all() const { return all_; }
  std::size_t size() const { return all_.size(); }

  std::optional<std::size_t> index_of(std::string_view tag) const;
  bool contains(std::string_view tag) const { return index_of(tag).has_value(); }

 private:
  std::vector<std::string> ptb_;
  std::vector<std::string> special_;
  std::vector<std::string> all_;
};

namespace tags {
inline constexpr std::string_view kRetweet = "RT";
inline constexpr std::string_view kUser = "USR";
inline constexpr std::string_view kHashtag = "HT";
inline constexpr std::string_view kUrl = "URL";
}  // namespace tags

}  // namespace cnfepi
