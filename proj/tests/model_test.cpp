#include <gtest/gtest.h>

#include "mst/model.h"

using namespace mst;

namespace {

InputSequence abc() {
    Action a = Action::web("GET", "http://sut.test/a");
    a.parameters = {{"q", "1"}};
    Action b = Action::web("POST", "http://sut.test/b");
    b.form_inputs = {{"user", "x"}, {"pass", "y"}};
    Action c = Action::web("GET", "http://sut.test/c");
    return make_sequence({a, b, c}, Origin::Crawler, "abc");
}

std::vector<std::string> urls(const InputSequence& s) {
    std::vector<std::string> out;
    for (const auto& a : s.actions) out.push_back(a.url.substr(a.url.rfind('/') + 1));
    return out;
}

void expect_positions(const InputSequence& s) {
    for (std::size_t i = 0; i < s.actions.size(); ++i) EXPECT_EQ(s.actions[i].position, i);
}

}  // namespace

TEST(CloneInput, EmptySequenceGetsNewIdentity) {
    InputSequence src = make_sequence({}, Origin::Crawler, "empty");
    InputSequence copy = clone_input(src);
    EXPECT_TRUE(copy.actions.empty());
    EXPECT_NE(copy.id, src.id);
    EXPECT_EQ(copy.origin, Origin::Derived);
    EXPECT_EQ(copy.source_id, "empty");
}

TEST(CloneInput, PreservesPositions) {
    InputSequence copy = clone_input(abc());
    ASSERT_EQ(copy.size(), 3u);
    expect_positions(copy);
}

TEST(CloneInput, MutatingCopyLeavesSourceUntouched) {
    InputSequence src = abc();
    InputSequence copy = clone_input(src);
    ASSERT_TRUE(copy.actions[0].set_parameter_value(0, "changed"));
    ASSERT_TRUE(copy.actions[1].set_form_input(1, "other"));
    EXPECT_EQ(src.actions[0].parameters[0].second, "1");
    EXPECT_EQ(src.actions[1].form_inputs[1].second, "y");
    EXPECT_EQ(copy.actions[0].parameters[0].second, "changed");
}

TEST(CloneInput, CloneOfDerivedKeepsOriginalSource) {
    InputSequence once = clone_input(abc());
    InputSequence twice = clone_input(once);
    EXPECT_EQ(twice.source_id, "abc");
}

TEST(AddAction, IntoEmpty) {
    InputSequence s = add_action(make_sequence({}, Origin::Script), 0, Action::web("GET", "http://sut.test/x"));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.actions[0].position, 0u);
}

TEST(AddAction, InMiddleShiftsPositions) {
    InputSequence s = add_action(abc(), 1, Action::web("GET", "http://sut.test/x"));
    EXPECT_EQ(urls(s), (std::vector<std::string>{"a", "x", "b", "c"}));
    expect_positions(s);
}

TEST(AddAction, AtEndAppends) {
    InputSequence s = add_action(abc(), 3, Action::web("GET", "http://sut.test/x"));
    EXPECT_EQ(urls(s).back(), "x");
}

TEST(AddAction, OutOfRangeThrowsPositionError) {
    try {
        add_action(abc(), 4, Action::wait(1));
        FAIL() << "expected PositionError";
    } catch (const PositionError& e) {
        EXPECT_EQ(e.index(), 4u);
        EXPECT_EQ(e.size(), 3u);
    }
}

TEST(AddAction, SourceUnchanged) {
    InputSequence src = abc();
    add_action(src, 0, Action::wait(5));
    EXPECT_EQ(src.size(), 3u);
}

TEST(Sublist, FullRangeCopies) {
    InputSequence src = abc();
    InputSequence s = sublist(src, 0, 3);
    EXPECT_TRUE(s.same_actions(src));
}

TEST(Sublist, EmptyRange) { EXPECT_TRUE(sublist(abc(), 2, 2).actions.empty()); }

TEST(Sublist, MiddleRenumbered) {
    Action d = Action::web("GET", "http://sut.test/d");
    InputSequence src = abc();
    src.actions.push_back(d);
    src.renumber();
    InputSequence s = sublist(src, 1, 3);
    EXPECT_EQ(urls(s), (std::vector<std::string>{"b", "c"}));
    expect_positions(s);
}

TEST(Sublist, BadRangesThrow) {
    EXPECT_THROW(sublist(abc(), 2, 1), PositionError);
    EXPECT_THROW(sublist(abc(), 0, 4), PositionError);
}

TEST(MutateAction, SetChannel) {
    Action a = Action::web("GET", "http://sut.test/a");
    ASSERT_EQ(a.channel, Channel::Https);
    EXPECT_TRUE(a.set_channel(Channel::Http));
    EXPECT_EQ(a.channel, Channel::Http);
}

TEST(MutateAction, IndexOutOfRangeReturnsFalse) {
    Action a = Action::web("GET", "http://sut.test/a");
    a.parameters = {{"q", "1"}};
    Action before = a;
    EXPECT_FALSE(a.set_parameter_value(1, "x"));
    EXPECT_FALSE(a.set_form_input(0, "x"));
    EXPECT_EQ(a, before);
    EXPECT_TRUE(a.set_parameter_value(0, "x"));
    EXPECT_EQ(a.parameters[0].second, "x");
}

TEST(MutateAction, SetSession) {
    Action a = Action::web("GET", "http://sut.test/a");
    EXPECT_TRUE(a.set_session(Session(std::vector<Session::Cookie>{{"sid", "42"}})));
    ASSERT_TRUE(a.session_override.has_value());
    EXPECT_EQ(a.session_override->get("sid"), "42");
}

TEST(Session, SetReplacesInPlace) {
    Session s({{"a", "1"}, {"b", "2"}});
    s.set("a", "3");
    s.set("c", "4");
    EXPECT_EQ(s.cookies(), (std::vector<Session::Cookie>{{"a", "3"}, {"b", "2"}, {"c", "4"}}));
    EXPECT_TRUE(s.erase("b"));
    EXPECT_FALSE(s.erase("b"));
}

TEST(Session, CookieHeaderRoundTrip) {
    Session s({{"sid", "S1001x"}, {"elevated", "true"}});
    EXPECT_EQ(s.to_cookie_header(), "sid=S1001x; elevated=true");
    EXPECT_EQ(Session::parse_cookie_header(s.to_cookie_header()), s);
}

TEST(Session, MergeOverwrites) {
    Session a(std::vector<Session::Cookie>{{"x", "1"}});
    a.merge(Session({{"x", "2"}, {"y", "3"}}));
    EXPECT_EQ(a.get("x"), "2");
    EXPECT_EQ(a.get("y"), "3");
}

TEST(Enums, StringRoundTrip) {
    for (auto c : {Channel::Http, Channel::Https}) EXPECT_EQ(channel_from_string(to_string(c)), c);
    for (auto o : {Origin::Crawler, Origin::Script, Origin::Derived}) EXPECT_EQ(origin_from_string(to_string(o)), o);
    for (auto k : {ActionKind::Web, ActionKind::Wait, ActionKind::ResetSut})
        EXPECT_EQ(action_kind_from_string(to_string(k)), k);
    for (auto e : {ElementKind::None, ElementKind::Entry, ElementKind::Anchor, ElementKind::Button, ElementKind::Script})
        EXPECT_EQ(element_kind_from_string(to_string(e)), e);
}

TEST(WebOutput, EmptyFileIffEmptyBody) {
    WebOutput o;
    EXPECT_TRUE(o.is_empty_file());
    o.body = " ";
    EXPECT_FALSE(o.is_empty_file());
}

TEST(User, Anonymous) {
    EXPECT_TRUE(User::anonymous().is_anonymous());
    EXPECT_FALSE((User{"admin", "pw", "admin", "admin"}).is_anonymous());
}
