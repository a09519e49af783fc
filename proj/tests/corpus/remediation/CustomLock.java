package com.acme;

@ThreadSafe
public class CustomLock {
  private final MyLock guard = new MyLock();
  private long total;

  public void add(long n) {
    guard.lock();
    try {
      total = total + n;
    } finally {
      guard.unlock();
    }
  }

  public long total() {
    guard.lock();
    try {
      return total;
    } finally {
      guard.unlock();
    }
  }
}
