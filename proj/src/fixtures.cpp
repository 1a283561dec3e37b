#include "mim/fixtures.hpp"

namespace mim::fixtures {

const std::string& original_scenario_html() {
  static const std::string html = R"(<div class="post">
<div class="post-header"><span class="author">Campus Report Daily</span></div>
<div class="post-body">
<p>A new report on political bullying at a state university has the campus talking. Students say the pressure to stay quiet is real, and the debate over free expression has never felt more charged.</p>
</div>
<div class="comments">
<div class="comment" data-topic="liberal-arts"><p>Liberal professors run these departments and liberal students enforce the line. Conservative kids keep their heads down.</p></div>
<div class="comment"><p>The far-left activists shout down anyone who disagrees. It gets more aggressive every semester.</p></div>
<div class="comment"><p>These kids are over-parented and can't handle a debate. Trump was right about campus speech.</p></div>
<div class="comment"><p>We need more viewpoint diversity, not less.</p></div>
<div class="comment"><p>My liberal neighbors agree with MORE of this than they admit.</p></div>
</div>
<script>var topic = "liberal";</script>
</div>
)";
  return html;
}

const std::string& mim_scenario_html() {
  static const std::string html = R"(<div class="post">
<div class="post-header"><span class="author">Campus Report Daily</span></div>
<div class="post-body">
<p>A new report on political bullying at a state university has the campus talking. Students say the pressure to stay quiet is real, and the debate over free expression has never felt less charged.</p>
</div>
<div class="comments">
<div class="comment" data-topic="liberal-arts"><p>Conservative professors run these departments and conservative students enforce the line. Conservative kids keep their heads down.</p></div>
<div class="comment"><p>The far-right activists shout down anyone who disagrees. It gets less aggressive every semester.</p></div>
<div class="comment"><p>These kids are under-parented and can't handle a debate. Alexandria Ocasio-Cortez was right about campus speech.</p></div>
<div class="comment"><p>We need less viewpoint diversity, not less.</p></div>
<div class="comment"><p>My conservative neighbors agree with LESS of this than they admit.</p></div>
</div>
<script>var topic = "liberal";</script>
</div>
)";
  return html;
}

const std::string& pilot_scenario_html() {
  static const std::string html = R"(<div class="post">
<div class="post-header"><span class="author">Campaign HQ</span></div>
<div class="post-body">
<p>Our campaign is about people, not power. I am running to be the Organizer in Chief, not the Commander in Chief.</p>
</div>
<div class="comments">
<div class="comment"><p>The Organizer in Chief is exactly what this country needs.</p></div>
<div class="comment"><p>He said it himself. He is not the Commander in Chief type.</p></div>
</div>
</div>
)";
  return html;
}

const std::string& pilot_swapped_html() {
  static const std::string html = R"(<div class="post">
<div class="post-header"><span class="author">Campaign HQ</span></div>
<div class="post-body">
<p>Our campaign is about people, not power. I am running to be the Commander in Chief, not the Organizer in Chief.</p>
</div>
<div class="comments">
<div class="comment"><p>The Commander in Chief is exactly what this country needs.</p></div>
<div class="comment"><p>He said it himself. He is not the Organizer in Chief type.</p></div>
</div>
</div>
)";
  return html;
}

std::string study_lexicon_text() {
  return
      "# Study lexicon: one-way surface-polarity substitutions.\n"
      "liberal -> conservative\n"
      "far-left -> far-right\n"
      "over-parented -> under-parented\n"
      "more -> less\n"
      "Trump -> Alexandria Ocasio-Cortez\n";
}

std::string pilot_lexicon_text() {
  return
      "# Pilot lexicon: bidirectional swap.\n"
      "Commander <-> Organizer\n";
}

}  // namespace mim::fixtures
