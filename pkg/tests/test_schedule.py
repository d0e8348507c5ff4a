import pytest

from fibwalk.errors import BudgetExceededError, InvalidIndexError
from fibwalk.schedule import CoinSchedule, fibonacci_number, fibonacci_word, schedule_for_horizon


def test_first_fibonacci_numbers():
    assert [fibonacci_number(k) for k in range(1, 11)] == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]


@pytest.mark.parametrize(
    "k, word",
    [(1, "1"), (2, "2"), (3, "12"), (4, "212"), (5, "12212"), (6, "21212212")],
)
def test_small_words(k, word):
    sched = fibonacci_word(k)
    assert sched.letters == word
    assert sched.generation_index == k


def _operator_expansion(k):
    # expand U[k] as a product of U1/U2 symbols, leftmost first, then read right to left
    prods = {1: ["1"], 2: ["2"]}
    for j in range(3, k + 1):
        prods[j] = prods[j - 1] + prods[j - 2]
    return "".join(reversed(prods[k]))


@pytest.mark.parametrize("k", range(1, 16))
def test_word_is_operator_product_read_right_to_left(k):
    assert fibonacci_word(k).letters == _operator_expansion(k)


def test_recursion_and_length_law():
    words = {k: fibonacci_word(k).letters for k in range(1, 27)}
    for k in range(2, 26):
        assert words[k + 1] == words[k - 1] + words[k]
    for k, w in words.items():
        assert len(w) == fibonacci_number(k)


def test_letter_counts_follow_fibonacci():
    # '1' count of v[k] is F(k-2) for k >= 3, '2' count is F(k-1)
    for k in range(3, 20):
        w = fibonacci_word(k).letters
        assert w.count("1") == fibonacci_number(k - 2)
        assert w.count("2") == fibonacci_number(k - 1)


def test_invalid_index():
    with pytest.raises(InvalidIndexError):
        fibonacci_word(0)


def test_budget():
    with pytest.raises(BudgetExceededError):
        fibonacci_word(30, max_length=1000)


@pytest.mark.parametrize(
    "T, letters, K",
    [(0, "", None), (1, "1", 1), (4, "1221", 5), (5, "12212", 5), (6, "212122", 6)],
)
def test_schedule_for_horizon(T, letters, K):
    sched = schedule_for_horizon(T)
    assert sched.letters == letters
    assert sched.generation_index == K


def test_horizon_prefix_flag():
    assert schedule_for_horizon(4).is_prefix
    assert not schedule_for_horizon(5).is_prefix


def test_bad_letters_rejected():
    with pytest.raises(ValueError):
        CoinSchedule("123")


def test_text_export():
    assert fibonacci_word(5).to_text() == "12212\n"
