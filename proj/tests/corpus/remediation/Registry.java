package com.acme;

import java.util.HashMap;

@ThreadSafe
public class Registry {
  private final SafeMap<String, String> names = new SafeMap<>();
  private final HashMap<String, String> aliases = new HashMap<>();
  private int version;

  public void register(String k, String v) {
    names.put(k, v);
  }

  public String lookup(String k) {
    return names.get(k);
  }

  public synchronized void alias(String k, String v) {
    aliases.put(k, v);
    version++;
  }

  public synchronized int version() {
    return version;
  }
}
