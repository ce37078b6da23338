import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from convopt.trace import Trace

floats = st.floats(allow_nan=False, allow_infinity=False, width=64)


class TestTrace:
    def test_header(self):
        t = Trace()
        t.append(0, [1.0, 2.0], 3.0, (0.5,))
        assert t.to_csv().splitlines()[0] == "step,x_1,x_2,f_value,aux"

    def test_final_and_points(self):
        t = Trace()
        t.append(0, 0.5, 1.0)
        t.append(1, 0.4, 2.0)
        np.testing.assert_array_equal(t.final_x, [0.4])
        assert t.points.shape == (2, 1)
        assert len(t) == 2 and t.dim == 1

    @given(st.lists(st.tuples(st.lists(floats, min_size=2, max_size=2), floats,
                              st.lists(floats, max_size=3)), min_size=1, max_size=10))
    def test_csv_round_trip(self, rows):
        t = Trace()
        for k, (x, f, aux) in enumerate(rows):
            t.append(k, x, f, aux)
        back = Trace.from_csv(t.to_csv())
        assert back == t
        assert back.to_csv() == t.to_csv()

    def test_file_round_trip(self, tmp_path):
        t = Trace()
        t.append(0, [0.1, 0.2], 1.0 / 3.0, (1e-300, -2.5))
        path = tmp_path / "t.csv"
        t.write_csv(path)
        assert Trace.read_csv(path) == t
