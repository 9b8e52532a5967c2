#include "ipthunt/desk/corpus.hpp"

#include <algorithm>
#include <map>

#include "ipthunt/core/text.hpp"
#include "ipthunt/extract/segment.hpp"

namespace ipthunt::desk {

namespace {

using Words = std::vector<std::string>;

template <typename T>
const T& pick(SplitMix64& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

bool chance(SplitMix64& rng, double p) { return rng.unit() < p; }

const std::map<CategoryLabel, Words>& keyword_table() {
  static const std::map<CategoryLabel, Words> t{
      {CategoryLabel::BlackHatSeo, {"蜘蛛池", "快速排名", "黑帽SEO", "百度霸屏", "SEO优化", "外链代发", "seo ranking boost", "寄生虫程序"}},
      {CategoryLabel::HackingService, {"黑客接单", "查开房记录", "手机定位", "改成绩", "hack account", "破解密码", "入侵网站", "查通话记录"}},
      {CategoryLabel::CounterfeitGoods, {"高仿手表", "奢侈品A货", "replica watches", "精仿包包", "仿牌鞋", "一比一复刻", "高仿烟酒"}},
      {CategoryLabel::DrugSales, {"出售冰毒", "大麻出售", "K粉货到付款", "buy weed", "迷药", "听话水", "摇头丸"}},
      {CategoryLabel::DataTheft, {"出售数据", "四件套", "银行卡料", "实名数据", "手机号数据", "个人信息出售", "leaked database"}},
      {CategoryLabel::SexService, {"上门服务", "同城约", "外围女", "escort service", "兼职妹", "全套服务", "包夜"}},
      {CategoryLabel::FakeAccount, {"出售微信号", "老号批发", "小号批发", "实名账号", "抖音号出售", "buy facebook accounts", "gmail老号"}},
      {CategoryLabel::SurrogacyService, {"代孕", "试管婴儿", "供卵", "助孕", "surrogacy agency", "包成功代孕"}},
      {CategoryLabel::FakeCertificate, {"办证", "代办毕业证", "学历认证", "fake diploma", "驾驶证办理", "假证", "certificate maker"}},
      {CategoryLabel::WeaponSales, {"出售枪支", "气枪", "仿真枪", "弩出售", "猎枪配件", "buy guns online"}},
      {CategoryLabel::FinancialFraud, {"贷款秒批", "信用卡套现", "刷单返利", "网贷口子", "无抵押贷款", "quick loan", "黑户贷款"}},
      {CategoryLabel::MoneyLaundering, {"跑分平台", "USDT承兑", "资金洗白", "代收代付", "资金过桥", "四方支付", "跑分"}},
      {CategoryLabel::Gambling, {"百家乐", "体育投注", "真人娱乐", "online casino", "彩票计划", "赌场", "棋牌游戏", "bet365"}},
      {CategoryLabel::Others, {"代写论文", "刷粉丝", "代考", "跑腿代办", "刷好评", "fake reviews"}},
  };
  return t;
}

const Words& descriptions() {
  static const Words w{"价格优惠", "24小时在线", "安全可靠", "诚信经营", "全国包邮", "当天到账", "专业团队",
                       "欢迎咨询", "cheap and fast", "100% safe", "货到付款", "秒回", "实力老店", "信誉第一",
                       "best price", "fast delivery", "保密发货", "正规渠道", "立即到账", "支持验货"};
  return w;
}

const Words& benign_phrases() {
  static const Words w{
      "how to bake bread",        "weather tomorrow",         "python tutorial for beginners",
      "天气预报 北京",            "红烧肉的做法",             "iPhone 15 价格",
      "2023年高考分数线",         "best hiking trails near me", "新闻联播",
      "東京 ラーメン おすすめ",   "서울 맛집 추천",           "cách nấu phở",
      "history of the roman empire", "learn guitar chords",   "上海到杭州高铁时刻表",
      "how to fix a flat tire",   "cheap flights to paris",   "家常菜谱大全",
      "machine learning course",  "world cup 2022 results",   "小学数学练习题",
      "download user manual pdf", "movie reviews this week",  "健康饮食建议",
      "university library hours", "如何学习英语",             "best laptop 2023",
      "opening hours city museum", "旅游攻略 云南",           "recipe for chocolate cake",
      "jazz music playlist",      "日本語 勉強 方法",         "car insurance quotes",
      "dog training tips",        "北京大学 招生简章",        "free online courses",
      "marathon training plan",   "天猫双十一活动",           "how to write a resume"};
  return w;
}

const Words& benign_extras() {
  static const Words w{"2023", "review", "guide", "免费下载", "视频", "tutorial", "official site", "最新",
                       "price list", "详细介绍", "wiki", "example.com", "2024年", "page 3", "part 2"};
  return w;
}

const Words& emoji() {
  static const Words w{"🔥", "✅", "💰", "🎲", "⭐", "❤", "👉", "☎", "✈", "🌟", "💯", "★", "◆"};
  return w;
}

const Words& tlds() {
  static const Words w{"com", "cc", "xyz", "net", "vip", "fun", "cn", "top", "site", "online", "shop", "win", "bet", "io", "me", "app"};
  return w;
}

std::string random_chars(SplitMix64& rng, std::string_view alphabet, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
  return s;
}

std::string make_domain(SplitMix64& rng) {
  static const Words stems{"ncao", "cheapfifa", "bet", "lucky", "vip", "ok", "king", "fast", "sun", "golden", "win", "ace"};
  return pick(rng, stems) + random_chars(rng, "abcdefghijklmnopqrstuvwxyz0123456789", 1 + rng.below(4)) + "." +
         pick(rng, tlds());
}

struct ContactParts {
  std::string phrase;
  std::string value;
};

ContactParts make_contact(SplitMix64& rng, ContactKind kind) {
  const std::string v = make_handle(rng, kind);
  static const Words tg{"telegram:@", "tg:@", "飞机:@", "纸飞机 @", "TG：", "电报@", "@", "询telegram:@", "Telegram @"};
  static const Words wx{"微信:", "加V:", "vx:", "薇信 ", "微:", "wx：", "V信", "加微信 ", "WeChat: "};
  static const Words qq{"QQ:", "扣扣", "企鹅:", "qq", "扣微", "QQ ", "加扣扣"};
  static const Words phone{"电话:", "手机", "tel:", "热线 ", "联系电话：", "phone "};
  static const Words site{"", "网址:", "访问 ", "官网 ", "入口 "};
  switch (kind) {
    case ContactKind::Telegram: {
      auto shown = v;
      if (chance(rng, 0.3)) shown[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(shown[0])));
      return {pick(rng, tg) + shown, v};
    }
    case ContactKind::WeChat: return {pick(rng, wx) + v, v};
    case ContactKind::QQ: return {pick(rng, qq) + v, v};
    case ContactKind::Phone: return {pick(rng, phone) + v, v};
    case ContactKind::Website: return {pick(rng, site) + v, v};
    case ContactKind::Other: break;
  }
  return {"", ""};
}

std::string open_deco(SplitMix64& rng, const std::string& inner) {
  switch (rng.below(6)) {
    case 0: return "【" + inner + "】";
    case 1: return "『" + inner + "』";
    case 2: return pick(rng, emoji()) + inner + pick(rng, emoji());
    case 3: return "[" + inner + "]";
    case 4: return inner + "|";
    default: return inner + "，";
  }
}

const std::vector<ContactKind>& contact_kinds() {
  static const std::vector<ContactKind> k{ContactKind::Telegram, ContactKind::WeChat, ContactKind::QQ,
                                          ContactKind::Phone, ContactKind::Website};
  return k;
}

}  // namespace

const std::vector<std::string>& category_keywords(CategoryLabel c) {
  static const Words none;
  const auto& t = keyword_table();
  const auto it = t.find(c);
  return it == t.end() ? none : it->second;
}

std::string make_handle(SplitMix64& rng, ContactKind kind) {
  constexpr std::string_view lower = "abcdefghijklmnopqrstuvwxyz";
  constexpr std::string_view digits = "0123456789";
  switch (kind) {
    case ContactKind::Telegram:
      return random_chars(rng, lower, 1 + rng.below(3)) + random_chars(rng, "abcdefghijklmnopqrstuvwxyz0123456789_", 4 + rng.below(6));
    case ContactKind::WeChat:
      return random_chars(rng, lower, 1 + rng.below(3)) + random_chars(rng, "abcdefghijklmnopqrstuvwxyz0123456789_-", 5 + rng.below(6));
    case ContactKind::QQ:
      return random_chars(rng, "123456789", 1) + random_chars(rng, digits, 4 + rng.below(6));
    case ContactKind::Phone:
      return (chance(rng, 0.2) ? "+86" : "") + std::string("1") + random_chars(rng, "3456789", 1) +
             random_chars(rng, digits, 9);
    case ContactKind::Website: return make_domain(rng);
    case ContactKind::Other: break;
  }
  return "";
}

SyntheticIpt make_ipt(SplitMix64& rng, CategoryLabel category, ContactKind contact) {
  SyntheticIpt ipt;
  ipt.categories = {category};
  ipt.contact_kind = contact;
  const auto& kw = category_keywords(category);
  std::string keywords = pick(rng, kw);
  if (chance(rng, 0.5)) keywords += " " + pick(rng, kw);
  std::string desc = pick(rng, descriptions());
  if (chance(rng, 0.4)) desc += pick(rng, emoji()) + pick(rng, descriptions());
  const auto c = make_contact(rng, contact);
  ipt.contact_phrase = c.phrase;
  ipt.contact_value = contact == ContactKind::Telegram ? ascii_lower(c.value) : c.value;
  std::string contact_part = c.phrase;
  if (contact != ContactKind::Website && chance(rng, 0.3)) {
    ipt.website = make_domain(rng);
    contact_part += pick(rng, emoji()) + ipt.website;
  }
  switch (rng.below(4)) {
    case 0: ipt.text = open_deco(rng, keywords) + desc + open_deco(rng, contact_part); break;
    case 1: ipt.text = keywords + pick(rng, emoji()) + desc + "【" + contact_part + "】"; break;
    case 2: ipt.text = open_deco(rng, contact_part) + keywords + " " + desc; break;
    default: ipt.text = keywords + "，" + desc + "，" + contact_part + pick(rng, emoji()); break;
  }
  return ipt;
}

SyntheticIpt make_ipt(SplitMix64& rng) {
  const auto cats = illicit_categories();
  return make_ipt(rng, pick(rng, cats), pick(rng, contact_kinds()));
}

std::string make_benign(SplitMix64& rng) {
  std::string s = pick(rng, benign_phrases());
  if (chance(rng, 0.35)) s += " " + pick(rng, benign_extras());
  if (chance(rng, 0.15)) s = pick(rng, benign_phrases()) + " - " + s;
  if (chance(rng, 0.08)) s += " (" + pick(rng, benign_extras()) + ")";
  return s;
}

std::vector<BinarySample> binary_corpus(std::size_t per_class, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<BinarySample> out;
  for (std::size_t i = 0; i < per_class; ++i) {
    out.push_back({make_ipt(rng).text, true});
    out.push_back({make_benign(rng), false});
  }
  return out;
}

std::vector<LabeledText> category_corpus(std::size_t per_label, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<LabeledText> out;
  for (std::size_t i = 0; i < per_label; ++i) {
    for (auto c : illicit_categories()) {
      auto ipt = make_ipt(rng, c, pick(rng, contact_kinds()));
      out.push_back({ipt.text, ipt.categories});
    }
    for (int k = 0; k < 3; ++k) out.push_back({make_benign(rng), {CategoryLabel::Benign}});
  }
  // A few two-category promotions, as in gambling-plus-loan offers.
  for (std::size_t i = 0; i < per_label / 2; ++i) {
    const auto& cats = illicit_categories();
    const auto a = pick(rng, cats);
    auto b = pick(rng, cats);
    if (b == a) continue;
    auto ipt = make_ipt(rng, a, pick(rng, contact_kinds()));
    ipt.text = pick(rng, category_keywords(b)) + " " + ipt.text;
    std::vector<CategoryLabel> labels{a, b};
    std::sort(labels.begin(), labels.end());
    out.push_back({ipt.text, labels});
  }
  return out;
}

std::vector<SegmentSample> segment_corpus(std::size_t ipts, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<SegmentSample> out;
  for (std::size_t i = 0; i < ipts; ++i) {
    const auto ipt = make_ipt(rng);
    const auto chars = to_u32(ipt.text);
    const auto phrase = to_u32(ipt.contact_phrase);
    const auto at = chars.find(phrase);
    for (const auto& s : segment_ipt(ipt.text)) {
      if (s.kind != SegmentKind::candidate) continue;
      const bool overlaps = at != std::u32string::npos && s.span.start < at + phrase.size() && at < s.span.end;
      const auto seg = to_u32(s.text);
      const bool has_ascii = std::any_of(seg.begin(), seg.end(), is_ascii_alnum);
      out.push_back({s.text, overlaps && has_ascii});
    }
    for (const auto& s : segment_ipt(make_benign(rng)))
      if (s.kind == SegmentKind::candidate) out.push_back({s.text, false});
  }
  return out;
}

std::vector<TypedText> contact_type_corpus(std::size_t per_kind, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<TypedText> out;
  static const Words other{"价格3999元", "订单号 2023 已发货", "第12345期", "满100减20", "2024年最新版",
                           "version 10.2.1", "room 1208", "共 88888 人浏览", "score 98765"};
  for (std::size_t i = 0; i < per_kind; ++i) {
    for (auto k : contact_kinds()) {
      const auto ipt = make_ipt(rng, pick(rng, illicit_categories()), k);
      out.push_back({ipt.text, k});
    }
    out.push_back({pick(rng, other) + " " + make_benign(rng), ContactKind::Other});
  }
  return out;
}

}  // namespace ipthunt::desk
