"""
Демонстрационный скрипт для быстрой проверки функциональности:
короткий пример вычисления и запуск тестовых функций без pytest
"""

import inspect
import sys
import traceback
from typing import Callable, Dict, List, Tuple


def run_tests(namespace: Dict[str, object], title: str) -> bool:
    """Запуск всех функций test_* из модуля с выводом ✅/❌"""
    print("=" * 60)
    print(f"🚀 {title}")
    print("=" * 60)

    tests: List[Tuple[str, Callable]] = [
        (name, obj) for name, obj in namespace.items() if name.startswith('test_') and callable(obj)
    ]
    results = []
    for test_name, test_func in tests:
        if inspect.signature(test_func).parameters:
            # фикстуры pytest (tmp_path, capsys) вне pytest недоступны
            print(f"⏭️  {test_name} - ПРОПУЩЕН (нужны фикстуры pytest)")
            continue
        try:
            test_func()
            results.append((test_name, True))
            print(f"✅ {test_name} - УСПЕШНО")
        except Exception as e:
            results.append((test_name, False))
            print(f"❌ {test_name} - ОШИБКА: {e}")
            traceback.print_exc(limit=2)

    passed = sum(1 for _, ok in results if ok)
    print("\n" + "=" * 60)
    print(f"📋 ИТОГ: {passed}/{len(results)} тестов пройдено")
    print("=" * 60)
    return passed == len(results)


def run_demo() -> bool:
    """Инварианты окружности x² + y² − 1 и разложение семейства из примера 6.1"""
    from report import JobMode, JobSpec, emit, read_fixture, run

    print("=" * 60)
    print("🚀 ДЕМОНСТРАЦИЯ ВЫЧИСЛЕНИЯ ИНВАРИАНТОВ")
    print("=" * 60)

    try:
        print("\n🔍 Коника x^2 + y^2 - 1")
        job = JobSpec(JobMode.INVARIANTS, text="vars: x, y\nx^2 + y^2 - 1")
        print(emit(run(job)))

        print("\n🔍 Семейство x + x^2*y*z = s")
        job = JobSpec(JobMode.FAMILY, text=read_fixture('example_6_1.poly'), parameter='s')
        print(emit(run(job)))

        print("\n✅ Демонстрация завершена!")
        return True
    except Exception as e:
        print(f"❌ Ошибка в демонстрации: {e}")
        return False


if __name__ == "__main__":
    sys.exit(0 if run_demo() else 1)
