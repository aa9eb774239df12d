"""
耗时统计测试
"""

import pytest

from src.utils.performance import (
    PerformanceMonitor,
    measure_time,
    memoize_on_instance,
    monitor_performance,
    performance_monitor,
)


@pytest.mark.unit
class TestPerformanceMonitor:
    """监控器汇总测试"""

    def test_record_and_summary(self):
        """按总耗时降序输出摘要"""
        monitor = PerformanceMonitor()
        monitor.record_operation("gldim", 0.5)
        monitor.record_operation("gldim", 0.25)
        monitor.record_operation("iso_test", 2.0, success=False)

        gldim = monitor.get_metrics("gldim")
        assert gldim["total_calls"] == 2
        assert gldim["average_time"] == pytest.approx(0.375)
        assert gldim["min_time"] == 0.25
        assert monitor.get_metrics("iso_test")["error_count"] == 1
        assert monitor.summary_lines()[0].startswith("iso_test:")

    def test_unknown_operation(self):
        """未记录的计算返回空字典"""
        assert PerformanceMonitor().get_metrics("minimal_resolution") == {}

    def test_reset(self):
        monitor = PerformanceMonitor()
        monitor.record_operation("a", 0.1)
        monitor.record_operation("b", 0.1)
        monitor.reset_metrics("a")
        assert list(monitor.get_metrics()) == ["b"]
        monitor.reset_metrics()
        assert monitor.get_metrics() == {}


@pytest.mark.unit
class TestInstrumentation:
    """装饰器与上下文管理器测试"""

    def test_decorator_counts_errors(self):
        """异常照常抛出并计入 error_count"""
        performance_monitor.reset_metrics("test:failing")

        @monitor_performance("test:failing")
        def failing():
            raise ValueError("boom")

        with pytest.raises(ValueError):
            failing()
        assert performance_monitor.get_metrics("test:failing")["error_count"] == 1

    def test_measure_time(self):
        performance_monitor.reset_metrics("test:block")
        with measure_time("test:block"):
            pass
        assert performance_monitor.get_metrics("test:block")["total_calls"] == 1


@pytest.mark.unit
class TestInstanceMemo:
    """按对象缓存测试"""

    def test_cached_per_instance(self):
        calls = []

        class Holder:
            pass

        @memoize_on_instance
        def double(obj, k, scale=1):
            calls.append(k)
            return 2 * k * scale

        first, second = Holder(), Holder()
        assert double(first, 3) == 6
        assert double(first, 3) == 6
        assert calls == [3]
        assert double(first, 3, scale=2) == 12
        assert double(second, 3) == 6
        assert calls == [3, 3, 3]
