from hypothesis import strategies as st

from fpcount import CountContext, EstimateTriple

hours = st.floats(min_value=0, max_value=500, allow_nan=False, allow_infinity=False)
gaps = st.floats(min_value=0, max_value=200, allow_nan=False, allow_infinity=False)


@st.composite
def triples(draw, max_o=500.0):
    o = draw(st.floats(min_value=0, max_value=max_o, allow_nan=False))
    mp = o + draw(gaps)
    p = mp + draw(gaps)
    return EstimateTriple(o, mp, p)


contexts = st.builds(
    CountContext,
    C=st.floats(min_value=0.1, max_value=10),
    i=st.floats(min_value=0, max_value=1),
    K=st.floats(min_value=0.1, max_value=10),
)
