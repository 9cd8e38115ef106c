from hypothesis import given, strategies as st

from docpolicy import css


def test_font_face_defaults_to_auto():
    fonts, anims = css.parse_stylesheet("@font-face{font-family:F;src:url(f.woff2)}")
    assert fonts == [{"family": "F", "src": "f.woff2", "display": "auto"}]
    assert anims == []


def test_font_face_quoted_and_display():
    text = """/* c */ @font-face { font-family: "My Font"; src: url('a/b.woff2') format("woff2"),
              url(b.woff); font-display: Optional; }"""
    fonts, _ = css.parse_stylesheet(text)
    assert fonts == [{"family": "My Font", "src": "a/b.woff2", "display": "optional"}]


def test_keyframes_and_transitions():
    text = """
    @keyframes slide { from { left: 0 } 50% { transform: none; width: 3px } to { left: 9px } }
    @-webkit-keyframes fade { to { opacity: 0 } }
    .a { color: red; transition: height .2s ease-in, opacity 1s; }
    .b { transition-property: margin-left, none; }
    .c { transition: none; }
    @media (max-width: 400px) { .d { transition: all 1s; } }
    """
    _, anims = css.parse_stylesheet(text)
    assert anims == [
        ("@keyframes slide", ["left", "transform", "width"], "keyframes"),
        ("@keyframes fade", ["opacity"], "keyframes"),
        (".a", ["height", "opacity"], "transition"),
        (".b", ["margin-left"], "transition"),
        (".d", ["all"], "transition"),
    ]


def test_lengths():
    assert css.px_length("300px") == 300
    assert css.px_length(" 12.7PX ") == 12
    assert css.px_length("50%") is None
    assert css.px_length("10vw") is None
    assert css.px_length("300") is None
    assert css.px_length("auto") is None
    assert css.attr_length("300") == 300
    assert css.attr_length("300px") == 300
    assert css.attr_length("50%") is None
    assert css.attr_length("") is None


def test_unterminated_blocks_are_counted():
    from collections import Counter
    diag = Counter()
    fonts, _ = css.parse_stylesheet("@font-face{font-family:F;src:url(x)", diag)
    assert fonts and diag["css_unterminated_block"] == 1


@given(st.text(alphabet="{}();:@,'\"/*abc- \n", max_size=200))
def test_total_on_garbage(text):
    css.parse_stylesheet(text)
