"""计算耗时统计

分解、整体维数、同构检验等耗时计算用 ``monitor_performance`` 装饰，
报告各命令用 ``measure_time`` 包裹；``--metrics`` 与 ``/api/v1/metrics``
读取同一个全局监控器。
"""

import time
import logging
from typing import Dict, Any, Iterator, List, Optional, Callable
from functools import wraps
from contextlib import contextmanager
from dataclasses import dataclass
from collections import defaultdict
import threading

from src.config.settings import get_settings
from src.utils.logger import log_performance

logger = logging.getLogger(__name__)


@dataclass
class PerformanceMetrics:
    """单个计算的累计耗时"""
    total_calls: int = 0
    total_time: float = 0.0
    min_time: float = float('inf')
    max_time: float = 0.0
    error_count: int = 0

    def add_measurement(self, duration: float, success: bool = True) -> None:
        self.total_calls += 1
        self.total_time += duration
        self.min_time = min(self.min_time, duration)
        self.max_time = max(self.max_time, duration)
        if not success:
            self.error_count += 1

    def get_average_time(self) -> float:
        return self.total_time / self.total_calls if self.total_calls > 0 else 0.0

    def as_dict(self) -> Dict[str, Any]:
        return {
            "total_calls": self.total_calls,
            "total_time": self.total_time,
            "average_time": self.get_average_time(),
            "min_time": self.min_time if self.total_calls else 0.0,
            "max_time": self.max_time,
            "error_count": self.error_count,
        }


class PerformanceMonitor:
    """线程安全的耗时汇总（API 可能并发执行命令）"""

    def __init__(self) -> None:
        self.metrics: Dict[str, PerformanceMetrics] = defaultdict(PerformanceMetrics)
        self._lock = threading.Lock()

    def record_operation(self, operation_name: str, duration: float, success: bool = True) -> None:
        with self._lock:
            self.metrics[operation_name].add_measurement(duration, success)

    def get_metrics(self, operation_name: Optional[str] = None) -> Dict[str, Any]:
        """获取耗时指标；指定名称时只返回该计算，未记录过则返回空字典"""
        with self._lock:
            if operation_name:
                if operation_name not in self.metrics:
                    return {}
                return {"operation": operation_name, **self.metrics[operation_name].as_dict()}
            return {name: m.as_dict() for name, m in sorted(self.metrics.items())}

    def summary_lines(self) -> List[str]:
        """按总耗时降序的文本摘要（--metrics）"""
        rows = sorted(self.get_metrics().items(), key=lambda kv: -kv[1]["total_time"])
        return [
            f"{name}: calls={m['total_calls']} total={m['total_time']:.3f}s avg={m['average_time']:.4f}s"
            for name, m in rows
        ]

    def reset_metrics(self, operation_name: Optional[str] = None) -> None:
        with self._lock:
            if operation_name:
                self.metrics.pop(operation_name, None)
            else:
                self.metrics.clear()


# 全局性能监控器实例
performance_monitor = PerformanceMonitor()


def _finish(name: str, start_time: float, success: bool) -> None:
    duration = time.time() - start_time
    performance_monitor.record_operation(name, duration, success)
    if duration > get_settings().slow_operation_seconds:
        log_performance(name, duration, slow=True)


def monitor_performance(operation_name: Optional[str] = None) -> Callable:
    """耗时统计装饰器，异常照常抛出并计入 error_count"""
    def decorator(func: Callable) -> Callable:
        name = operation_name or f"{func.__module__}.{func.__name__}"

        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            start_time = time.time()
            success = True
            try:
                return func(*args, **kwargs)
            except Exception:
                success = False
                raise
            finally:
                _finish(name, start_time, success)

        return wrapper

    return decorator


@contextmanager
def measure_time(operation_name: str) -> Iterator[None]:
    """上下文管理器用于测量报告各部分的时间"""
    start_time = time.time()
    success = True
    try:
        yield
    except Exception:
        success = False
        raise
    finally:
        _finish(operation_name, start_time, success)


def memoize_on_instance(func: Callable) -> Callable:
    """按首个参数缓存结果

    缓存放在首个参数的 ``__dict__`` 中，随该对象一同回收；其余参数须可哈希。
    """
    attr = f"_memo_{func.__name__}"

    @wraps(func)
    def wrapper(obj: Any, *args: Any, **kwargs: Any) -> Any:
        memo = obj.__dict__.get(attr)
        if memo is None:
            memo = obj.__dict__.setdefault(attr, {})
        key = (args, tuple(sorted(kwargs.items())))
        if key not in memo:
            memo[key] = func(obj, *args, **kwargs)
        return memo[key]

    return wrapper
